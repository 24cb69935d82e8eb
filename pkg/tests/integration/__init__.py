"""End-to-end tests: CLI and corpus-wide properties."""
