"""Tests for Trickle HDX."""
