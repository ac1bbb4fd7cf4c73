"""Command modules organized by domain."""

from .dataset import CollectCommand, FixtureCommand, ValidateCommand
from .index import ComputeCommand, RankCommand, StatsCommand

__all__ = [
    # Index commands
    "ComputeCommand",
    "RankCommand",
    "StatsCommand",
    # Dataset commands
    "CollectCommand",
    "FixtureCommand",
    "ValidateCommand",
]
