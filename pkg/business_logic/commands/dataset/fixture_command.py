"""
Fixture Command for the Web Reputation Index system.

Exports the embedded appendix table (normalized index values of the Turkish
universities) in the results format, so ``rank`` and ``stats`` can read the
exported file exactly like a computed one.

The published summary declares 170 universities; the row count of the
embedded table is reported next to it so a transcription discrepancy is
visible.

Classes:
    FixtureCommand: Command implementation of the appendix export.

Example:
    >>> FixtureCommand().execute(RunConfig(output_path=Path("appendix.csv")))
    📋 170 appendix rows (declared 170)
    📊 mean=0.280157 max=0.449508 min=0.150473 std=0.055548 count=170 convention=population
"""

from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.ranking_service import RankingService
from business_logic.services.wri_service import WriService
from persistence.appendix_fixture import fixture_results, load_appendix_fixture
from persistence.errors import WebReputationError
from persistence.models import IndexResult, RunConfig
from presentation.table_formatter import format_stats_line


class FixtureCommand(Command):
    """
    Return Value Patterns:
        - (True, list[IndexResult]): appendix rows in rank order
        - (False, WebReputationError): output could not be written
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[list[IndexResult], WebReputationError]]:
        try:
            fixture = load_appendix_fixture()
            if fixture.count_discrepancy:
                self.status(
                    f"⚠️  {fixture.row_count} appendix rows, {fixture.declared_count} declared"
                )
            else:
                self.status(f"📋 {fixture.row_count} appendix rows (declared {fixture.declared_count})")

            ordered = RankingService.order(fixture_results())
            stats = WriService.descriptive_stats(
                [result.final_index for result in ordered], config.std_convention
            )
            store.save_results(ordered, stats, config.output_path, config.format)
            self.status(f"📊 {format_stats_line(stats)}")
            return True, ordered
        except WebReputationError as e:
            return False, e
