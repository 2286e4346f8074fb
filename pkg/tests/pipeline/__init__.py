"""Tests for pipeline stages, cache and artifacts."""
