"""
Normalization Service Module for the Web Reputation Index system.

Indicator series are brought onto a common [0, 1] scale with min-max
normalization, then signed by polarity: positive indicators keep their
values, negative indicators are multiplied by -1 so they subtract from the
index. A constant series has no spread to normalize; it is flagged as
degenerate and every value becomes 0, which keeps it out of the index.

Missing raw values are filled before normalization with the worst observable
value of the series: 0 for positive indicators (no Facebook page means no
likes) and the series maximum for negative ones.

Classes:
    NormalizationService: Static min-max, polarity and snapshot normalization.

Dependencies:
    - numpy: Vectorized float64 arithmetic over each series
    - persistence.models: NormalizedSeries, SignedSeries, Snapshot, Polarity
    - persistence.errors: EmptySeriesError, NonFiniteValueError, InsufficientEntitiesError

Example:
    >>> n = NormalizationService.min_max_normalize({"a": 0, "b": 5, "c": 10})
    >>> n.values
    {'a': 0.0, 'b': 0.5, 'c': 1.0}
    >>> NormalizationService.apply_polarity(n, Polarity.NEGATIVE).values
    {'a': 0.0, 'b': -0.5, 'c': -1.0}
"""

import logging
from typing import Mapping, Optional

import numpy as np

from persistence.errors import (
    EmptySeriesError,
    InsufficientEntitiesError,
    NonFiniteValueError,
)
from persistence.models import NormalizedSeries, Polarity, SignedSeries, Snapshot

logger = logging.getLogger(__name__)


class NormalizationService:
    """Min-max normalization and polarity signing of indicator series."""

    @staticmethod
    def min_max_normalize(
        series: Mapping[str, float], indicator_id: str = ""
    ) -> NormalizedSeries:
        """
        Min-max normalize a series keyed by entity slug.

        Each value maps to ``(x - min) / (max - min)``. When ``max == min`` the
        series is degenerate: every output is 0 and the flag is set.

        Args:
            series: Finite values keyed by entity slug.
            indicator_id: Indicator the series belongs to, carried into the result.

        Raises:
            EmptySeriesError: If the series is empty.
            NonFiniteValueError: If any value is NaN or infinite.
        """
        if not series:
            raise EmptySeriesError(f"cannot normalize an empty series {indicator_id!r}")

        slugs = list(series)
        values = np.asarray([series[slug] for slug in slugs], dtype=np.float64)
        finite = np.isfinite(values)
        if not finite.all():
            bad = [slug for slug, ok in zip(slugs, finite) if not ok]
            raise NonFiniteValueError(
                f"series {indicator_id!r} has non-finite values for: {', '.join(bad)}"
            )

        low = float(values.min())
        high = float(values.max())
        if high == low:
            normalized = np.zeros_like(values)
            degenerate = True
        else:
            normalized = (values - low) / (high - low)
            degenerate = False

        return NormalizedSeries(
            indicator_id=indicator_id,
            values=dict(zip(slugs, normalized.tolist())),
            source_min=low,
            source_max=high,
            degenerate=degenerate,
        )

    @staticmethod
    def apply_polarity(normalized: NormalizedSeries, polarity: Polarity) -> SignedSeries:
        """Keep positive values; multiply negative ones by -1 (0 stays +0.0)."""
        if polarity == Polarity.POSITIVE:
            values = dict(normalized.values)
        else:
            values = {slug: 0.0 - value for slug, value in normalized.values.items()}
        return SignedSeries(
            indicator_id=normalized.indicator_id,
            polarity=polarity,
            values=values,
            degenerate=normalized.degenerate,
        )

    @staticmethod
    def fill_missing(
        series: Mapping[str, Optional[float]], polarity: Polarity
    ) -> dict[str, float]:
        """
        Replace Missing (None) values with the worst observable value.

        Positive indicators fill with 0; negative indicators fill with the
        largest present value, or 0 when nothing is present.
        """
        present = [value for value in series.values() if value is not None]
        if polarity == Polarity.POSITIVE or not present:
            fill = 0.0
        else:
            fill = max(present)
        return {
            slug: fill if value is None else value for slug, value in series.items()
        }

    @staticmethod
    def normalize_snapshot(snapshot: Snapshot) -> dict[str, NormalizedSeries]:
        """
        Normalize every indicator of a snapshot.

        Booleans enter as 0.0/1.0, Missing values are filled per polarity and
        each indicator series is min-max normalized independently.

        Returns:
            dict[str, NormalizedSeries]: One series per indicator, in indicator-set order.

        Raises:
            InsufficientEntitiesError: If the snapshot has fewer than two entities.
            EmptySeriesError, NonFiniteValueError: Propagated from min_max_normalize.
        """
        if len(snapshot.entities) < 2:
            raise InsufficientEntitiesError(
                f"min-max normalization needs at least 2 entities, got {len(snapshot.entities)}"
            )

        normalized: dict[str, NormalizedSeries] = {}
        for spec in snapshot.indicator_set.specs:
            raw = {
                entity.slug: entity.value_of(spec.id).as_number()
                for entity in snapshot.entities
            }
            filled = NormalizationService.fill_missing(raw, spec.polarity)
            series = NormalizationService.min_max_normalize(filled, spec.id)
            if series.degenerate:
                logger.info("indicator %s is constant across all entities", spec.id)
            normalized[spec.id] = series
        return normalized
