"""
Test suite for WriService.

Covers WRI aggregation, both population modes and their zero-population
guards, the final rescale, descriptive statistics, and the full pipeline,
which is checked against an independent straight-line recomputation over
randomly generated snapshots.
"""

import math
import random
import unittest

import pytest

from business_logic.services.indicator_service import IndicatorService
from business_logic.services.ranking_service import RankingService
from business_logic.services.wri_service import WriService
from persistence.appendix_fixture import load_appendix_fixture
from persistence.errors import (
    DegenerateIndexError,
    EmptyInputError,
    NoPositiveIndicatorsError,
    NonFiniteValueError,
    SchemaError,
)
from persistence.models import (
    IndicatorSet,
    Polarity,
    PopulationMode,
    RawValue,
    ResultFlag,
    SeriesStats,
    Snapshot,
    StdConvention,
)
from tests.builders import (
    entity,
    make_snapshot,
    random_snapshot,
    small_indicator_set,
    three_university_snapshot,
)


def reference_final_index(snapshot: Snapshot, mode: PopulationMode) -> dict[str, float]:
    """Straight-line recomputation of the whole index, written without the services."""
    slugs = [e.slug for e in snapshot.entities]
    signed: dict[str, list[float]] = {slug: [] for slug in slugs}
    positives = 0
    for spec in snapshot.indicator_set.specs:
        raw = [e.value_of(spec.id).as_number() for e in snapshot.entities]
        present = [v for v in raw if v is not None]
        fill = max(present) if spec.polarity == Polarity.NEGATIVE and present else 0.0
        xs = [fill if v is None else v for v in raw]
        low, high = min(xs), max(xs)
        if high == low:
            continue
        if spec.polarity == Polarity.POSITIVE:
            positives += 1
        for slug, x in zip(slugs, xs):
            n = (x - low) / (high - low)
            signed[slug].append(n if spec.polarity == Polarity.POSITIVE else -n)

    wri = {slug: sum(terms) / positives for slug, terms in signed.items()}

    populations = {e.slug: e.population for e in snapshot.entities}
    if mode == PopulationMode.FORMULA_LITERAL:
        divisors = {slug: p if p else 1 for slug, p in populations.items()}
    else:
        low, high = min(populations.values()), max(populations.values())
        scaled = {slug: (p - low) / (high - low) if high > low else 0.0 for slug, p in populations.items()}
        nonzero = [v for v in scaled.values() if v > 0]
        guard = min(nonzero) if nonzero else 1.0
        divisors = {slug: v if v > 0 else guard for slug, v in scaled.items()}

    per_capita = {slug: wri[slug] / divisors[slug] for slug in slugs}
    low, high = min(per_capita.values()), max(per_capita.values())
    return {slug: (v - low) / (high - low) for slug, v in per_capita.items()}


def random_indicator_set(rng: random.Random) -> IndicatorSet:
    specs = IndicatorService.build_default_indicator_set().specs
    while True:
        chosen = [spec for spec in specs if rng.random() < 0.6]
        if any(spec.polarity == Polarity.POSITIVE for spec in chosen):
            return IndicatorSet(specs=tuple(chosen))


class TestComputeWri(unittest.TestCase):
    """Test cases for WriService.compute_wri."""

    def setUp(self):
        self.indicator_set = IndicatorService.build_default_indicator_set()
        self.negatives = {"alexa_rank", "alexa_bounce"}

    def signed(self, positive: float, negative_magnitude: float) -> dict[str, float]:
        return {
            indicator_id: -negative_magnitude if indicator_id in self.negatives else positive
            for indicator_id in self.indicator_set.ids
        }

    def test_maximal_case(self):
        wri, flags = WriService.compute_wri(self.signed(1.0, 0.0), self.indicator_set)

        self.assertEqual(wri, 1.0)
        self.assertEqual(flags, ())

    def test_null_case(self):
        wri, flags = WriService.compute_wri(self.signed(0.0, 0.0), self.indicator_set)

        self.assertEqual(wri, 0.0)
        self.assertEqual(flags, ())

    def test_negatives_are_subtracted(self):
        wri, _ = WriService.compute_wri(self.signed(0.5, 0.5), self.indicator_set)

        self.assertAlmostEqual(wri, 6.0 / 14.0, delta=1e-12)

    def test_negative_wri_is_flagged_not_clamped(self):
        wri, flags = WriService.compute_wri(self.signed(0.01, 0.95), self.indicator_set)

        self.assertAlmostEqual(wri, (0.14 - 1.9) / 14.0, delta=1e-12)
        self.assertLess(wri, 0.0)
        self.assertEqual(flags, (ResultFlag.WRI_OUT_OF_RANGE,))

    def test_degenerate_indicators_leave_the_sum_and_the_count(self):
        signed = self.signed(0.5, 0.0)
        signed["dmoz_listed"] = 0.0

        wri, flags = WriService.compute_wri(signed, self.indicator_set, degenerate_ids={"dmoz_listed"})

        self.assertAlmostEqual(wri, 0.5, delta=1e-12)
        self.assertEqual(flags, (ResultFlag.DEGENERATE_INDICATORS_EXCLUDED,))

    def test_no_positive_indicator_left_raises(self):
        positives = [spec.id for spec in self.indicator_set.specs if spec.polarity == Polarity.POSITIVE]

        with self.assertRaises(NoPositiveIndicatorsError):
            WriService.compute_wri(self.signed(0.0, 0.0), self.indicator_set, positives)

    def test_missing_signed_value_raises(self):
        signed = self.signed(0.5, 0.5)
        del signed["fb_likes"]

        with self.assertRaises(SchemaError):
            WriService.compute_wri(signed, self.indicator_set)

    def test_raising_a_positive_value_never_lowers_wri(self):
        base = self.signed(0.3, 0.3)
        higher = dict(base, fb_likes=0.9)

        self.assertGreater(
            WriService.compute_wri(higher, self.indicator_set)[0],
            WriService.compute_wri(base, self.indicator_set)[0],
        )


class TestPopulationNormalize(unittest.TestCase):
    """Test cases for WriService.population_normalize."""

    def setUp(self):
        self.pop_stats = SeriesStats(mean=36820.0, max=73640.0, min=0.0, std=1.0, count=3)

    def test_formula_zero_population_divides_by_one(self):
        value, flags = WriService.population_normalize(
            0.3, 0, PopulationMode.FORMULA_LITERAL, self.pop_stats
        )

        self.assertEqual(value, 0.3)
        self.assertEqual(flags, (ResultFlag.ZERO_POPULATION_GUARD,))

    def test_formula_unit_population(self):
        value, flags = WriService.population_normalize(
            0.3, 1, PopulationMode.FORMULA_LITERAL, self.pop_stats
        )

        self.assertEqual(value, 0.3)
        self.assertEqual(flags, ())

    def test_text_largest_population_divides_by_one(self):
        value, flags = WriService.population_normalize(
            0.45, 73640, PopulationMode.TEXT_LITERAL, self.pop_stats
        )

        self.assertEqual(value, 0.45)
        self.assertEqual(flags, ())

    def test_text_smallest_population_uses_smallest_nonzero_divisor(self):
        value, flags = WriService.population_normalize(
            0.45, 0, PopulationMode.TEXT_LITERAL, self.pop_stats, smallest_nonzero=0.5
        )

        self.assertEqual(value, 0.9)
        self.assertEqual(flags, (ResultFlag.ZERO_POPULATION_GUARD,))

    def test_text_without_nonzero_population_divides_by_one(self):
        value, flags = WriService.population_normalize(
            0.45, 0, PopulationMode.TEXT_LITERAL, self.pop_stats
        )

        self.assertEqual(value, 0.45)
        self.assertEqual(flags, (ResultFlag.ZERO_POPULATION_GUARD,))

    def test_non_increasing_in_population(self):
        for mode in PopulationMode:
            with self.subTest(mode=mode):
                values = [
                    WriService.population_normalize(0.3, p, mode, self.pop_stats, 1e-4)[0]
                    for p in (1, 10, 1000, 20000, 73640)
                ]
                self.assertEqual(values, sorted(values, reverse=True))


class TestFinalRescale(unittest.TestCase):
    """Test cases for WriService.final_rescale."""

    def test_rescales_onto_unit_interval(self):
        self.assertEqual(
            WriService.final_rescale({"a": 2.0, "b": 4.0, "c": 6.0}),
            {"a": 0.0, "b": 0.5, "c": 1.0},
        )

    def test_unit_interval_with_endpoints_is_unchanged(self):
        values = {"a": 0.0, "b": 0.75, "c": 1.0}

        self.assertEqual(WriService.final_rescale(values), values)

    def test_preserves_order(self):
        rng = random.Random(5)
        values = {f"e{i}": rng.uniform(-1, 1) for i in range(30)}

        rescaled = WriService.final_rescale(values)

        self.assertEqual(
            sorted(values, key=values.get), sorted(rescaled, key=rescaled.get)
        )

    def test_equal_values_raise(self):
        with self.assertRaises(DegenerateIndexError):
            WriService.final_rescale({"a": 0.2, "b": 0.2})

    def test_single_value_raises(self):
        with self.assertRaises(DegenerateIndexError):
            WriService.final_rescale({"a": 0.2})


class TestDescriptiveStats(unittest.TestCase):
    """Test cases for WriService.descriptive_stats."""

    def test_population_convention(self):
        stats = WriService.descriptive_stats([0.0, 1.0], StdConvention.POPULATION)

        self.assertEqual((stats.mean, stats.std, stats.count), (0.5, 0.5, 2))

    def test_sample_convention(self):
        stats = WriService.descriptive_stats([0.2, 0.4, 0.6], StdConvention.SAMPLE)

        self.assertAlmostEqual(stats.std, 0.2, delta=1e-12)
        self.assertEqual(stats.convention, StdConvention.SAMPLE)

    def test_single_value_has_zero_std(self):
        for convention in StdConvention:
            with self.subTest(convention=convention):
                stats = WriService.descriptive_stats([0.42], convention)
                self.assertEqual((stats.mean, stats.min, stats.max, stats.std), (0.42, 0.42, 0.42, 0.0))

    def test_appendix_values(self):
        values = load_appendix_fixture().values

        population = WriService.descriptive_stats(values, StdConvention.POPULATION)
        sample = WriService.descriptive_stats(values, StdConvention.SAMPLE)

        self.assertEqual(population.count, 170)
        self.assertEqual(population.max, 0.449508)
        self.assertEqual(population.min, 0.150473)
        self.assertAlmostEqual(population.mean, 0.280157, delta=1e-6)
        self.assertAlmostEqual(population.std, 0.055548, delta=1e-6)
        self.assertAlmostEqual(sample.std, 0.055712, delta=1e-6)

    def test_min_mean_max_ordering_on_random_series(self):
        rng = random.Random(1000)
        for _ in range(1000):
            values = [rng.uniform(-1e3, 1e3) for _ in range(rng.randint(1, 40))]
            stats = WriService.descriptive_stats(values)
            self.assertLessEqual(stats.min, stats.mean)
            self.assertLessEqual(stats.mean, stats.max)
            self.assertGreaterEqual(stats.std, 0.0)

    def test_empty_input_raises(self):
        with self.assertRaises(EmptyInputError):
            WriService.descriptive_stats([])

    def test_non_finite_input_raises(self):
        with self.assertRaises(NonFiniteValueError):
            WriService.descriptive_stats([0.1, float("nan")])


class TestRunPipeline(unittest.TestCase):
    """Test cases for WriService.run_pipeline."""

    def test_three_university_formula_mode(self):
        result = WriService.run_pipeline(three_university_snapshot())
        by_slug = {r.slug: r for r in result.results}

        self.assertAlmostEqual(by_slug["alpha"].wri, 2.0 / 3.0, delta=1e-12)
        self.assertAlmostEqual(by_slug["beta"].wri, 0.0, delta=1e-12)
        self.assertAlmostEqual(by_slug["gamma"].wri, 0.5, delta=1e-12)
        self.assertAlmostEqual(by_slug["alpha"].final_index, 2.0 / 3.0, delta=1e-9)
        self.assertEqual(by_slug["beta"].final_index, 0.0)
        self.assertEqual(by_slug["gamma"].final_index, 1.0)
        self.assertEqual([r.slug for r in result.results], ["alpha", "beta", "gamma"])
        self.assertEqual(result.stats.count, 3)
        self.assertEqual(result.degenerate_ids, ())

    def test_three_university_text_mode(self):
        result = WriService.run_pipeline(three_university_snapshot(), PopulationMode.TEXT_LITERAL)
        by_slug = {r.slug: r for r in result.results}

        self.assertAlmostEqual(by_slug["alpha"].pop_normalized, 2.0, delta=1e-9)
        self.assertAlmostEqual(by_slug["gamma"].pop_normalized, 1.5, delta=1e-9)
        self.assertEqual(by_slug["alpha"].final_index, 1.0)
        self.assertAlmostEqual(by_slug["gamma"].final_index, 0.75, delta=1e-9)
        self.assertIn(ResultFlag.ZERO_POPULATION_GUARD, by_slug["gamma"].flags)
        self.assertNotIn(ResultFlag.ZERO_POPULATION_GUARD, by_slug["alpha"].flags)
        self.assertEqual(result.mode, PopulationMode.TEXT_LITERAL)

    def test_dominant_entity_gets_the_extremes(self):
        snapshot = make_snapshot(
            [
                entity("a", 100, {"likes": 10.0, "listed": True, "links": 10.0, "bounce": 10.0}),
                entity("b", 100, {"likes": 1.0, "listed": False, "links": 1.0, "bounce": 90.0}),
            ]
        )

        by_slug = {r.slug: r for r in WriService.run_pipeline(snapshot).results}

        self.assertEqual(by_slug["a"].final_index, 1.0)
        self.assertEqual(by_slug["b"].final_index, 0.0)

    def test_zero_population_entity_is_flagged(self):
        snapshot = make_snapshot(
            [
                entity("new", 0, {"likes": 5.0, "listed": False, "links": 5.0, "bounce": 50.0}),
                entity("old", 4000, {"likes": 50.0, "listed": True, "links": 50.0, "bounce": 20.0}),
                entity("mid", 900, {"likes": 20.0, "listed": True, "links": 1.0, "bounce": 30.0}),
            ]
        )

        by_slug = {r.slug: r for r in WriService.run_pipeline(snapshot).results}

        self.assertIn(ResultFlag.ZERO_POPULATION_GUARD, by_slug["new"].flags)
        self.assertEqual(by_slug["new"].pop_normalized, by_slug["new"].wri)
        self.assertNotIn(ResultFlag.ZERO_POPULATION_GUARD, by_slug["old"].flags)

    def test_equal_populations_rank_the_same_in_both_modes(self):
        rng = random.Random(21)
        indicator_set = small_indicator_set()
        for _ in range(20):
            base = random_snapshot(rng, indicator_set, 8)
            snapshot = base.model_copy(
                update={
                    "entities": tuple(
                        e.model_copy(update={"population": 5000}) for e in base.entities
                    )
                }
            )
            formula = RankingService.rank(WriService.run_pipeline(snapshot).results)
            text = RankingService.rank(
                WriService.run_pipeline(snapshot, PopulationMode.TEXT_LITERAL).results
            )
            self.assertEqual(formula.slugs, text.slugs)

    def test_constant_indicator_has_no_effect(self):
        rng = random.Random(8)
        full_set = IndicatorService.build_default_indicator_set()
        reduced_set = full_set.without("dmoz_listed")
        for _ in range(10):
            base = random_snapshot(rng, full_set, 10)
            with_dmoz = base.model_copy(
                update={
                    "entities": tuple(
                        e.model_copy(update={"values": {**e.values, "dmoz_listed": RawValue.boolean(True)}})
                        for e in base.entities
                    )
                }
            )
            without_dmoz = make_snapshot(
                (
                    e.model_copy(
                        update={"values": {k: v for k, v in e.values.items() if k != "dmoz_listed"}}
                    )
                    for e in base.entities
                ),
                reduced_set,
            )

            kept = WriService.run_pipeline(with_dmoz)
            removed = WriService.run_pipeline(without_dmoz)

            self.assertEqual(kept.degenerate_ids, ("dmoz_listed",))
            for a, b in zip(kept.results, removed.results):
                self.assertAlmostEqual(a.final_index, b.final_index, delta=1e-12)
                self.assertIn(ResultFlag.DEGENERATE_INDICATORS_EXCLUDED, a.flags)

    def test_entity_order_does_not_change_outputs(self):
        rng = random.Random(13)
        snapshot = random_snapshot(rng, IndicatorService.build_default_indicator_set(), 10)
        shuffled_entities = list(snapshot.entities)
        rng.shuffle(shuffled_entities)
        shuffled = snapshot.model_copy(update={"entities": tuple(shuffled_entities)})

        original = WriService.run_pipeline(snapshot)
        reordered = WriService.run_pipeline(shuffled)

        self.assertEqual(original.stats, reordered.stats)
        self.assertEqual(
            {r.slug: r.final_index for r in original.results},
            {r.slug: r.final_index for r in reordered.results},
        )

    @pytest.mark.slow
    def test_matches_reference_on_random_snapshots(self):
        rng = random.Random(2013)
        for trial in range(100):
            indicator_set = random_indicator_set(rng)
            snapshot = random_snapshot(rng, indicator_set, rng.randint(2, 10))
            if trial % 3 == 0:
                first, *rest = snapshot.entities
                snapshot = snapshot.model_copy(
                    update={"entities": (first.model_copy(update={"population": 0}), *rest)}
                )
            for mode in PopulationMode:
                with self.subTest(trial=trial, mode=mode):
                    expected = reference_final_index(snapshot, mode)
                    result = WriService.run_pipeline(snapshot, mode)
                    for r in result.results:
                        self.assertAlmostEqual(r.final_index, expected[r.slug], delta=1e-9)
                        self.assertGreaterEqual(r.final_index, 0.0)
                        self.assertLessEqual(r.final_index, 1.0)


    def test_zero_population_entity_in_every_random_snapshot(self):
        rng = random.Random(1453)
        for trial in range(100):
            snapshot = random_snapshot(rng, random_indicator_set(rng), rng.randint(3, 30))
            entities = list(snapshot.entities)
            zero = rng.randrange(len(entities))
            entities[zero] = entities[zero].model_copy(update={"population": 0})
            snapshot = snapshot.model_copy(update={"entities": tuple(entities)})
            zero_slug = entities[zero].slug

            for mode in PopulationMode:
                with self.subTest(trial=trial, mode=mode):
                    result = WriService.run_pipeline(snapshot, mode)
                    for r in result.results:
                        self.assertTrue(math.isfinite(r.wri))
                        self.assertTrue(math.isfinite(r.pop_normalized))
                        self.assertTrue(0.0 <= r.final_index <= 1.0)
                    guarded = next(r for r in result.results if r.slug == zero_slug)
                    self.assertIn(ResultFlag.ZERO_POPULATION_GUARD, guarded.flags)


class TestComparePopulationModes(unittest.TestCase):
    """Test cases for WriService.compare_population_modes."""

    def test_three_university_snapshot(self):
        # formula ranks gamma, alpha, beta; text ranks alpha, gamma, beta
        tau = WriService.compare_population_modes(three_university_snapshot())

        self.assertAlmostEqual(tau, 1.0 / 3.0, delta=1e-12)


if __name__ == "__main__":
    unittest.main()
