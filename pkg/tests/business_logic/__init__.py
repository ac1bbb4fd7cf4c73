"""Tests for business logic layer."""
