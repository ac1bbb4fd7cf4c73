"""
WRI Service Module for the Web Reputation Index system.

This module aggregates signed, normalized indicators into the Web Reputation
Index (WRI), divides it by student population and rescales the result onto
[0, 1]. It also computes the descriptive statistics reported for an index run.

Pipeline:
    normalize_snapshot -> apply_polarity -> compute_wri
        -> population_normalize -> final_rescale -> descriptive_stats

WRI is the sum of positive indicator values minus the sum of negative
indicator magnitudes, divided by C', the number of non-degenerate positive
indicators. Terms are summed in indicator-set order so results do not depend
on scheduling. WRI is never clamped; a value outside [0, 1] is flagged.

Population division has two modes:

- FormulaLiteral divides by the raw student count, using 1 for institutions
  with no students yet.
- TextLiteral divides by the min-max normalized student count. Where that
  count normalizes to 0 the smallest nonzero normalized count is used
  instead (1 if there is none).

Classes:
    WriService: Static WRI, population, rescale, statistics and pipeline operations.

Dependencies:
    - numpy: Mean, extrema and standard deviation
    - business_logic.services.normalization_service: Min-max and polarity
    - business_logic.services.ranking_service: Mode comparison by Kendall's tau
    - persistence.models: IndexResult, SeriesStats, PipelineResult, PopulationMode

Example:
    >>> result = WriService.run_pipeline(snapshot, PopulationMode.FORMULA_LITERAL)
    >>> result.stats.count
    170
    >>> WriService.descriptive_stats([0.2, 0.4, 0.6], StdConvention.SAMPLE).std
    0.2
"""

import logging
from typing import Iterable, Mapping, Optional

import numpy as np

from business_logic.services.normalization_service import NormalizationService
from business_logic.services.ranking_service import RankingService
from persistence.errors import (
    DegenerateIndexError,
    EmptyInputError,
    NoPositiveIndicatorsError,
    NonFiniteValueError,
    SchemaError,
)
from persistence.models import (
    IndexResult,
    IndicatorSet,
    PipelineResult,
    Polarity,
    PopulationMode,
    ResultFlag,
    SeriesStats,
    Snapshot,
    StdConvention,
)

logger = logging.getLogger(__name__)


class WriService:
    """Aggregation, population normalization and statistics of the index."""

    @staticmethod
    def compute_wri(
        signed: Mapping[str, float],
        indicator_set: IndicatorSet,
        degenerate_ids: Iterable[str] = (),
    ) -> tuple[float, tuple[ResultFlag, ...]]:
        """
        Aggregate one entity's signed indicator values.

        Args:
            signed: Signed normalized values keyed by indicator id. Positive
                indicators lie in [0, 1], negative ones in [-1, 0].
            indicator_set: Universe fixing the summation order and polarities.
            degenerate_ids: Indicators excluded from the sum and from C'.

        Returns:
            tuple: ``(wri, flags)``. Flags hold WriOutOfRange when the value
            leaves [0, 1] and DegenerateIndicatorsExcluded when an indicator
            of the set was excluded.

        Raises:
            NoPositiveIndicatorsError: If no non-degenerate positive indicator remains.
            SchemaError: If a non-degenerate indicator has no signed value.
        """
        excluded = set(degenerate_ids) & set(indicator_set.ids)
        c_prime = sum(
            1
            for spec in indicator_set.specs
            if spec.polarity == Polarity.POSITIVE and spec.id not in excluded
        )
        if c_prime == 0:
            raise NoPositiveIndicatorsError(
                "every positive indicator is degenerate; the index is undefined"
            )

        total = 0.0
        for spec in indicator_set.specs:
            if spec.id in excluded:
                continue
            if spec.id not in signed:
                raise SchemaError(f"no signed value for indicator '{spec.id}'")
            # Negative indicators are already signed, so adding subtracts their magnitude.
            total += signed[spec.id]
        wri = total / c_prime

        flags: list[ResultFlag] = []
        if not 0.0 <= wri <= 1.0:
            flags.append(ResultFlag.WRI_OUT_OF_RANGE)
        if excluded:
            flags.append(ResultFlag.DEGENERATE_INDICATORS_EXCLUDED)
        return wri, tuple(flags)

    @staticmethod
    def population_normalize(
        wri: float,
        population: int,
        mode: PopulationMode,
        pop_stats: SeriesStats,
        smallest_nonzero: Optional[float] = None,
    ) -> tuple[float, tuple[ResultFlag, ...]]:
        """
        Divide a WRI by the entity's population divisor.

        Args:
            wri: The entity's WRI.
            population: Student count (>= 0).
            mode: FormulaLiteral or TextLiteral.
            pop_stats: Statistics over the snapshot's populations; TextLiteral
                uses their min and max.
            smallest_nonzero: TextLiteral guard divisor, the smallest nonzero
                normalized population of the snapshot. 1 is used when None.

        Returns:
            tuple: ``(value, flags)`` with ZeroPopulationGuard set when a
            substitute divisor was used.
        """
        if mode == PopulationMode.FORMULA_LITERAL:
            if population == 0:
                return wri / 1.0, (ResultFlag.ZERO_POPULATION_GUARD,)
            return wri / population, ()

        spread = pop_stats.max - pop_stats.min
        divisor = (population - pop_stats.min) / spread if spread > 0 else 0.0
        if divisor > 0:
            return wri / divisor, ()
        guard = smallest_nonzero if smallest_nonzero else 1.0
        return wri / guard, (ResultFlag.ZERO_POPULATION_GUARD,)

    @staticmethod
    def final_rescale(values: Mapping[str, float]) -> dict[str, float]:
        """
        Min-max rescale population-normalized values onto [0, 1].

        Raises:
            DegenerateIndexError: If there are fewer than two values or all are equal.
        """
        if len(values) < 2:
            raise DegenerateIndexError(
                f"final rescale needs at least 2 values, got {len(values)}"
            )
        rescaled = NormalizationService.min_max_normalize(values, "final_index")
        if rescaled.degenerate:
            raise DegenerateIndexError(
                "every entity has the same population-normalized value; the ranking is undefined"
            )
        return dict(rescaled.values)

    @staticmethod
    def descriptive_stats(
        values: Iterable[float],
        std_convention: StdConvention = StdConvention.POPULATION,
    ) -> SeriesStats:
        """
        Mean, extrema and standard deviation of a series.

        Population divides the squared deviations by N, Sample by N - 1. A
        single value has a standard deviation of 0 under both conventions.

        Raises:
            EmptyInputError: If the series is empty.
            NonFiniteValueError: If any value is NaN or infinite.
        """
        array = np.asarray(list(values), dtype=np.float64)
        if array.size == 0:
            raise EmptyInputError("cannot describe an empty series")
        if not np.isfinite(array).all():
            raise NonFiniteValueError("cannot describe a series with non-finite values")

        low = float(array.min())
        high = float(array.max())
        mean = min(max(float(array.mean()), low), high)
        if array.size == 1:
            std = 0.0
        else:
            ddof = 1 if std_convention == StdConvention.SAMPLE else 0
            std = float(array.std(ddof=ddof))

        return SeriesStats(
            mean=mean,
            max=high,
            min=low,
            std=std,
            count=int(array.size),
            convention=std_convention,
        )

    @staticmethod
    def run_pipeline(
        snapshot: Snapshot,
        mode: PopulationMode = PopulationMode.FORMULA_LITERAL,
        std_convention: StdConvention = StdConvention.POPULATION,
    ) -> PipelineResult:
        """
        Run the full index pipeline over a snapshot.

        Results come back in snapshot entity order; statistics are taken over
        the values in slug order so that shuffling entities changes nothing.

        Raises:
            InsufficientEntitiesError, NonFiniteValueError, NoPositiveIndicatorsError,
            DegenerateIndexError: Propagated from the pipeline stages.
        """
        indicator_set = snapshot.indicator_set
        normalized = NormalizationService.normalize_snapshot(snapshot)
        degenerate_ids = tuple(
            indicator_id for indicator_id in indicator_set.ids if normalized[indicator_id].degenerate
        )
        if degenerate_ids:
            logger.info("excluding degenerate indicators: %s", ", ".join(degenerate_ids))

        signed_series = {
            spec.id: NormalizationService.apply_polarity(normalized[spec.id], spec.polarity)
            for spec in indicator_set.specs
        }

        by_slug = sorted(snapshot.entities, key=lambda entity: entity.slug)
        pop_stats = WriService.descriptive_stats(entity.population for entity in by_slug)
        smallest_nonzero = None
        if mode == PopulationMode.TEXT_LITERAL:
            normalized_pop = NormalizationService.min_max_normalize(
                {entity.slug: float(entity.population) for entity in by_slug}, "population"
            )
            nonzero = [value for value in normalized_pop.values.values() if value > 0]
            smallest_nonzero = min(nonzero) if nonzero else None

        partial: list[tuple[str, str, float, float, tuple[ResultFlag, ...], dict[str, float]]] = []
        for entity in snapshot.entities:
            signed = {
                indicator_id: series.values[entity.slug]
                for indicator_id, series in signed_series.items()
            }
            wri, wri_flags = WriService.compute_wri(signed, indicator_set, degenerate_ids)
            pop_value, pop_flags = WriService.population_normalize(
                wri, entity.population, mode, pop_stats, smallest_nonzero
            )
            partial.append(
                (entity.slug, entity.name, wri, pop_value, wri_flags + pop_flags, signed)
            )

        final = WriService.final_rescale({slug: pop_value for slug, _, _, pop_value, _, _ in partial})
        results = tuple(
            IndexResult(
                slug=slug,
                name=name,
                wri=wri,
                pop_normalized=pop_value,
                final_index=final[slug],
                flags=flags,
                signed_values=signed,
            )
            for slug, name, wri, pop_value, flags, signed in partial
        )

        out_of_range = sum(1 for r in results if ResultFlag.WRI_OUT_OF_RANGE in r.flags)
        if out_of_range:
            logger.warning("%d entities have a WRI outside [0, 1]", out_of_range)

        stats = WriService.descriptive_stats(
            (final[entity.slug] for entity in by_slug), std_convention
        )
        return PipelineResult(
            results=results,
            stats=stats,
            population_stats=pop_stats,
            degenerate_ids=degenerate_ids,
            mode=mode,
        )

    @staticmethod
    def compare_population_modes(
        snapshot: Snapshot,
        std_convention: StdConvention = StdConvention.POPULATION,
    ) -> float:
        """Kendall's tau between the FormulaLiteral and TextLiteral rankings of a snapshot."""
        formula = WriService.run_pipeline(snapshot, PopulationMode.FORMULA_LITERAL, std_convention)
        text = WriService.run_pipeline(snapshot, PopulationMode.TEXT_LITERAL, std_convention)
        return RankingService.kendall_tau(
            RankingService.rank(formula.results, label=PopulationMode.FORMULA_LITERAL.value),
            RankingService.rank(text.results, label=PopulationMode.TEXT_LITERAL.value),
        )
