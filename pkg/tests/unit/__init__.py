"""Unit tests for Trickle HDX."""
