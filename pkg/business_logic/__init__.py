"""
Business Logic Layer

Commands (one per command-line operation) and the services they delegate to:
indicator schema, normalization, index computation, ranking, collection and
report data.
"""

from .base import Command
from .commands import (
    CollectCommand,
    ComputeCommand,
    FixtureCommand,
    RankCommand,
    StatsCommand,
    ValidateCommand,
)
from .services import (
    CollectorService,
    IndicatorService,
    NormalizationService,
    RankingService,
    RateLimiter,
    ReportService,
    WriService,
)

__all__ = [
    # Index commands
    "ComputeCommand",
    "RankCommand",
    "StatsCommand",
    # Dataset commands
    "CollectCommand",
    "FixtureCommand",
    "ValidateCommand",
    # Services
    "CollectorService",
    "IndicatorService",
    "NormalizationService",
    "RankingService",
    "RateLimiter",
    "ReportService",
    "WriService",
    # Base
    "Command",
]
