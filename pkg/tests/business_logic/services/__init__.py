"""Tests for business logic services."""
