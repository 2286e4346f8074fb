"""Tests for similarity and influence matrices."""
