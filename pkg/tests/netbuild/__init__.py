"""Tests for network construction."""
