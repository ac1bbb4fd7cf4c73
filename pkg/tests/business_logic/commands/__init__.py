"""Tests for the index and dataset commands."""
