"""
Rank Command for the Web Reputation Index system.

This module implements the ``rank`` operation. It reads a results file (or
the embedded appendix values with ``--from-fixture``), orders the entities by
final index and prints the top and/or bottom of the ranking as tables.

With neither ``--top`` nor ``--bottom`` the whole ranking is printed. The
bottom table lists the worst entity first and keeps each entity's rank in the
full ranking, so "Deniz Harp Okulu" shows as rank 170 in the appendix data.

Classes:
    RankCommand: Command implementation of ranking and top/bottom extraction.

Dependencies:
    - business_logic.services.ranking_service.RankingService: Ordering and slicing
    - presentation.table_formatter.format_ranking_table: Table rendering
    - business_logic.dataset_store_manager.store: Report output

Example:
    >>> RankCommand().execute(RunConfig(from_fixture=True, top=10))
    +-------------------------------------------+
    |       Ten most reputable universities      |
    ...
"""

from typing import Union

from business_logic.base.command import Command
from business_logic.dataset_store_manager import store
from business_logic.services.ranking_service import RankingService
from persistence.errors import WebReputationError
from persistence.models import Ranking, RunConfig
from presentation.table_formatter import format_ranking_table


def _title(position: str, k: int) -> str:
    if k == 10:
        return f"Ten {position} reputable universities"
    return f"{k} {position} reputable universities"


class RankCommand(Command):
    """
    Command printing ranking tables.

    Return Value Patterns:
        - (True, Ranking): the full ranking of the input
        - (False, KOutOfRangeError): ``--top``/``--bottom`` outside 1..N
        - (False, WebReputationError): missing or unreadable results
    """

    def execute(self, config: RunConfig) -> tuple[bool, Union[Ranking, WebReputationError]]:
        try:
            results, _ = self.results(config)
            ranking = RankingService.rank(results, label=config.label)

            tables = []
            if config.top is not None:
                tables.append(
                    format_ranking_table(
                        RankingService.top_k(ranking, config.top),
                        _title("most", config.top),
                        config.decimal_comma,
                    )
                )
            if config.bottom is not None:
                tables.append(
                    format_ranking_table(
                        RankingService.bottom_k(ranking, config.bottom),
                        _title("least", config.bottom),
                        config.decimal_comma,
                    )
                )
            if not tables:
                tables.append(
                    format_ranking_table(ranking, "Web reputation ranking", config.decimal_comma)
                )

            store.write_report("\n\n".join(tables) + "\n", config.output_path)
            self.status(f"✅ Ranked {len(ranking)} entities")
            return True, ranking
        except WebReputationError as e:
            return False, e
