"""
Stats Command for the Web Reputation Index system.

Prints the descriptive statistics of the final index values and, on request,
the data behind the two distribution figures: an equal-width histogram and an
ordinal scatter in ranking order.

Classes:
    StatsCommand: Command implementation of descriptive statistics.

Example:
    >>> StatsCommand().execute(RunConfig(from_fixture=True, histogram_path=Path("hist.csv")))
"""

from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.ranking_service import RankingService
from business_logic.services.report_service import ReportService
from business_logic.services.wri_service import WriService
from persistence.errors import WebReputationError
from persistence.models import RunConfig, SeriesStats
from presentation.table_formatter import format_histogram_table, format_stats_table


class StatsCommand(Command):
    """
    Command computing mean, extrema and standard deviation of the index.

    Statistics are always recomputed from the values with the requested
    ``--std`` convention; a stored statistics sidecar is not trusted.

    Return Value Patterns:
        - (True, SeriesStats)
        - (False, WebReputationError)
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[SeriesStats, WebReputationError]]:
        try:
            results, _ = self.results(config)
            values = [result.final_index for result in RankingService.order(results)]
            stats = WriService.descriptive_stats(values, config.std_convention)

            sections = [format_stats_table(stats, config.decimal_comma)]
            bins = ReportService.emit_histogram(values, config.bins)
            sections.append(format_histogram_table(bins, config.decimal_comma))
            store.write_report("\n\n".join(sections) + "\n", config.output_path)

            if config.histogram_path is not None:
                store.write_histogram(bins, config.histogram_path)
                self.status(f"📊 Histogram written to {config.histogram_path}")
            if config.scatter_path is not None:
                store.write_scatter(ReportService.emit_scatter(values), config.scatter_path)
                self.status(f"📊 Scatter written to {config.scatter_path}")
            return True, stats
        except WebReputationError as e:
            return False, e
