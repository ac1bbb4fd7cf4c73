"""Base module for command pattern implementation."""

from .command import Command

__all__ = ["Command"]
