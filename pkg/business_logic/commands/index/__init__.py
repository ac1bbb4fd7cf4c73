from .compute_command import ComputeCommand
from .rank_command import RankCommand
from .stats_command import StatsCommand

__all__ = ["ComputeCommand", "RankCommand", "StatsCommand"]
