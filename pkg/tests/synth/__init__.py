"""Tests for the synthetic market generator."""
