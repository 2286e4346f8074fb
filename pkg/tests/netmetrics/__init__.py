"""Tests for network metrics."""
