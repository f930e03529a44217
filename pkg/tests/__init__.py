"""Tests for jacres."""
