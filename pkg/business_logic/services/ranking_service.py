"""
Ranking Service Module for the Web Reputation Index system.

Turns index results into ordered rankings, extracts the most and least
reputable institutions, and compares two rankings with Kendall's tau.

Ordering is descending by final index with ties broken by slug ascending, so
every ranking is deterministic. ``bottom_k`` lists the worst institution
first, the way a "least reputable" table is read.

Classes:
    RankingService: Static ranking operations.

Dependencies:
    - numpy: Pairwise concordance counting for Kendall's tau
    - persistence.models: IndexResult, Ranking, RankingEntry
    - persistence.errors: EmptyInputError, KOutOfRangeError, MismatchedUniverseError

Example:
    >>> ranking = RankingService.rank(results)
    >>> [entry.slug for entry in RankingService.top_k(ranking, 3).entries]
    ['anadolu-universitesi', 'istanbul-universitesi', 'gazi-universitesi']
    >>> RankingService.kendall_tau(ranking, ranking)
    1.0
"""

from typing import Iterable

import numpy as np

from persistence.errors import EmptyInputError, KOutOfRangeError, MismatchedUniverseError
from persistence.models import IndexResult, Ranking, RankingEntry


class RankingService:
    """Ranking, top/bottom extraction and rank correlation."""

    @staticmethod
    def order(results: Iterable[IndexResult]) -> list[IndexResult]:
        """Results sorted by final index descending, slug ascending."""
        return sorted(results, key=lambda result: (-result.final_index, result.slug))

    @staticmethod
    def rank(results: Iterable[IndexResult], label: str = "") -> Ranking:
        """
        Rank results by final index.

        Raises:
            EmptyInputError: If there are no results.
        """
        ordered = RankingService.order(results)
        if not ordered:
            raise EmptyInputError("cannot rank an empty result set")
        return Ranking(
            entries=tuple(
                RankingEntry(
                    rank=position,
                    slug=result.slug,
                    name=result.name,
                    value=result.final_index,
                )
                for position, result in enumerate(ordered, start=1)
            ),
            label=label,
        )

    @staticmethod
    def top_k(ranking: Ranking, k: int) -> Ranking:
        """The first ``k`` entries, best first."""
        RankingService._check_k(ranking, k)
        return Ranking(entries=ranking.entries[:k], label=ranking.label)

    @staticmethod
    def bottom_k(ranking: Ranking, k: int) -> Ranking:
        """The last ``k`` entries, worst first. Entries keep their original ranks."""
        RankingService._check_k(ranking, k)
        return Ranking(entries=tuple(reversed(ranking.entries[-k:])), label=ranking.label)

    @staticmethod
    def _check_k(ranking: Ranking, k: int) -> None:
        if not 1 <= k <= len(ranking):
            raise KOutOfRangeError(f"k must be between 1 and {len(ranking)}, got {k}")

    @staticmethod
    def kendall_tau(a: Ranking, b: Ranking) -> float:
        """
        Kendall's tau between two orderings of the same entities.

        Every pair of entities is compared; the result is
        ``(concordant - discordant) / (n * (n - 1) / 2)``. Rankings hold no
        ties in position, so this equals tau-b. A ranking with fewer than two
        entries correlates perfectly with itself.

        Raises:
            MismatchedUniverseError: If the rankings hold different slugs.
        """
        slugs_a = a.slugs
        slugs_b = b.slugs
        if len(slugs_a) != len(slugs_b) or set(slugs_a) != set(slugs_b):
            missing = sorted(set(slugs_a) ^ set(slugs_b))
            raise MismatchedUniverseError(
                f"rankings cover different entities: {', '.join(missing) or 'duplicate slugs'}"
            )

        n = len(slugs_a)
        if n < 2:
            return 1.0

        position_in_b = {slug: index for index, slug in enumerate(slugs_b)}
        y = np.array([position_in_b[slug] for slug in slugs_a], dtype=np.int64)
        # x is 0..n-1, so sign(x_j - x_i) is +1 for every j > i.
        upper = np.triu(np.sign(y[None, :] - y[:, None]), k=1)
        score = int(upper.sum())
        pairs = n * (n - 1) // 2
        return score / pairs
