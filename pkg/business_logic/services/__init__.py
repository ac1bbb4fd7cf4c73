"""Services module for the index pipeline, collectors and reports."""

from .indicator_service import IndicatorService
from .normalization_service import NormalizationService
from .wri_service import WriService
from .ranking_service import RankingService
from .collector_service import CollectorService
from .report_service import ReportService
from .rate_limiter import RateLimiter

__all__ = [
    "IndicatorService",
    "NormalizationService",
    "WriService",
    "RankingService",
    "CollectorService",
    "ReportService",
    "RateLimiter",
]
