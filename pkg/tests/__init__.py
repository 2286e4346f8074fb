"""Tests for pminet."""
