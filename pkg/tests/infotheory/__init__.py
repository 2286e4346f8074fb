"""Tests for entropy, mutual information and correlation estimators."""
