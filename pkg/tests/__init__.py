"""Test suite for regsentry."""
