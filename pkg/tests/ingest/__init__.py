"""Tests for price loading and return transforms."""
