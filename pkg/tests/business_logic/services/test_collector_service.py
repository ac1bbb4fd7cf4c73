"""
Test suite for CollectorService.

Every test runs against the in-memory FakeTransport, so no socket is opened.
Covers single-value collection and its failure paths, weighted multi-location
latency probing, and whole-snapshot collection with deterministic assembly.
"""

import unittest
from unittest.mock import MagicMock

from pydantic import ValidationError

from business_logic.services.collector_service import LATENCY_INDICATOR_ID, CollectorService
from business_logic.services.indicator_service import IndicatorService
from persistence.errors import AllProbesFailedError, UsageError
from persistence.models import (
    IndicatorKind,
    ProbeLocation,
    ProbePlan,
    ProvenanceKind,
)
from persistence.settings import PROBE_PORT
from tests.builders import (
    BACKLINKS,
    DMOZ,
    FIXED_TIME,
    HOSTS,
    LIKES,
    FakeTransport,
    entity,
    single_location_plan,
    site_responses,
    universities,
)


class TestCollectValue(unittest.TestCase):
    """Test cases for CollectorService.collect_value."""

    def test_backlink_count_from_page(self):
        transport = FakeTransport(site_responses())

        value = CollectorService.collect_value(universities()[0], BACKLINKS, transport)

        self.assertEqual(value.value, 80400.0)
        self.assertEqual(value.provenance.kind, ProvenanceKind.COLLECTED)
        self.assertEqual(value.provenance.source_id, "yahoo_backlinks")
        self.assertEqual(value.provenance.timestamp, FIXED_TIME)
        self.assertEqual(
            transport.fetches,
            [("yahoo_backlinks", "https://siteexplorer.example/backlinks?site=anadolu.edu.tr")],
        )

    def test_not_found_response_is_missing(self):
        url = BACKLINKS.resolve("anadolu.edu.tr")
        transport = FakeTransport({url: (404, "Not Found")})

        with self.assertLogs("business_logic.services.collector_service", level="WARNING") as logs:
            value = CollectorService.collect_value(universities()[0], BACKLINKS, transport)

        self.assertTrue(value.is_missing)
        self.assertIn("HTTP 404", logs.output[0])

    def test_network_failure_is_missing(self):
        with self.assertLogs("business_logic.services.collector_service", level="WARNING"):
            value = CollectorService.collect_value(universities()[0], BACKLINKS, FakeTransport())

        self.assertTrue(value.is_missing)

    def test_extraction_failure_is_missing(self):
        url = BACKLINKS.resolve("anadolu.edu.tr")
        transport = FakeTransport({url: (200, "<p>no data</p>")})

        with self.assertLogs("business_logic.services.collector_service", level="WARNING"):
            value = CollectorService.collect_value(universities()[0], BACKLINKS, transport)

        self.assertTrue(value.is_missing)

    def test_non_finite_page_values_are_missing(self):
        url = LIKES.resolve("anadolu.edu.tr")
        for body in ('{"likes": NaN}', '{"likes": Infinity}', '{"likes": 1e400}', '{"likes": "inf"}'):
            with self.subTest(body=body):
                transport = FakeTransport({url: (200, body)})

                with self.assertLogs("business_logic.services.collector_service", level="WARNING") as logs:
                    value = CollectorService.collect_value(universities()[0], LIKES, transport)

                self.assertTrue(value.is_missing)
                self.assertIn("ExtractionError", logs.output[0])

    def test_entity_without_host_is_missing_without_fetching(self):
        transport = FakeTransport(site_responses())

        value = CollectorService.collect_value(entity("x", 10, {}), BACKLINKS, transport)

        self.assertTrue(value.is_missing)
        self.assertEqual(transport.fetches, [])

    def test_boolean_indicator_turns_count_into_flag(self):
        transport = FakeTransport(
            {DMOZ.resolve("anadolu.edu.tr"): (200, "<p>3 matching sites</p>")}
        )

        value = CollectorService.collect_value(
            universities()[0], DMOZ, transport, kind=IndicatorKind.BOOLEAN
        )

        self.assertIs(value.value, True)

    def test_replayed_twice_gives_identical_values(self):
        transport = FakeTransport(site_responses(), offline=True)

        first = CollectorService.collect_value(universities()[0], BACKLINKS, transport)
        second = CollectorService.collect_value(universities()[0], BACKLINKS, transport)

        self.assertEqual(first, second)

    def test_limiter_is_used_online_and_skipped_offline(self):
        limiter = MagicMock()
        online = FakeTransport(site_responses())
        offline = FakeTransport(site_responses(), offline=True)

        CollectorService.collect_value(universities()[0], BACKLINKS, online, limiter=limiter)
        CollectorService.collect_value(universities()[0], BACKLINKS, offline, limiter=limiter)

        limiter.wait_if_needed.assert_called_once_with("yahoo_backlinks", 5.0)


class TestProbeLatency(unittest.TestCase):
    """Test cases for CollectorService.probe_latency and renormalize_weights."""

    def test_single_location(self):
        transport = FakeTransport(latencies={("tr-istanbul", "itu.edu.tr"): [240.0, 240.0, 240.0]})

        self.assertEqual(
            CollectorService.probe_latency("itu.edu.tr", single_location_plan(), transport), 240.0
        )

    def test_median_of_attempts(self):
        transport = FakeTransport(latencies={("tr-istanbul", "itu.edu.tr"): [900.0, 100.0, 200.0]})

        self.assertEqual(
            CollectorService.probe_latency("itu.edu.tr", single_location_plan(), transport), 200.0
        )

    def test_latency_connects_to_the_configured_port(self):
        transport = MagicMock(offline=True)
        transport.connect_time.return_value = 50.0

        latency = CollectorService.probe_latency("itu.edu.tr", single_location_plan(attempts=1), transport)

        self.assertEqual(latency, 50.0)
        self.assertEqual(ProbePlan().port, PROBE_PORT)
        transport.connect_time.assert_called_once_with("tr-istanbul", "itu.edu.tr", PROBE_PORT, 0)

    def test_connect_port_must_be_valid(self):
        for port in (0, 70000):
            with self.subTest(port=port):
                with self.assertRaises(ValidationError):
                    ProbePlan(port=port)

    def test_turkey_weighted_default_plan(self):
        plan = ProbePlan()
        latencies = {
            (location.probe_id, "itu.edu.tr"): [100.0 if location.weight == 0.5 else 200.0] * 3
            for location in plan.locations
        }

        latency = CollectorService.probe_latency("itu.edu.tr", plan, FakeTransport(latencies=latencies))

        self.assertAlmostEqual(latency, 150.0, delta=1e-9)

    def test_failed_location_drops_out_and_weights_renormalize(self):
        plan = ProbePlan()
        latencies = {
            (location.probe_id, "itu.edu.tr"): [None] * 3 if location.weight == 0.5 else [200.0] * 3
            for location in plan.locations
        }

        latency = CollectorService.probe_latency("itu.edu.tr", plan, FakeTransport(latencies=latencies))

        self.assertAlmostEqual(latency, 200.0, delta=1e-9)

    def test_failed_attempts_are_skipped(self):
        transport = FakeTransport(latencies={("tr-istanbul", "itu.edu.tr"): [None, 120.0, 140.0]})

        self.assertEqual(
            CollectorService.probe_latency("itu.edu.tr", single_location_plan(), transport), 130.0
        )

    def test_result_lies_between_location_medians(self):
        plan = ProbePlan()
        values = iter([35.0, 410.0, 180.0, 95.0, 260.0])
        latencies = {
            (location.probe_id, "itu.edu.tr"): [next(values)] * 3 for location in plan.locations
        }

        latency = CollectorService.probe_latency("itu.edu.tr", plan, FakeTransport(latencies=latencies))

        self.assertGreaterEqual(latency, 35.0)
        self.assertLessEqual(latency, 410.0)

    def test_all_probes_failing_raises(self):
        with self.assertRaises(AllProbesFailedError):
            CollectorService.probe_latency("itu.edu.tr", ProbePlan(), FakeTransport())

    def test_spread_sleeps_between_attempts_when_online(self):
        plan = ProbePlan(
            locations=(ProbeLocation(probe_id="tr-istanbul", weight=1.0),), attempts=3, spread_seconds=60.0
        )
        transport = FakeTransport(latencies={("tr-istanbul", "itu.edu.tr"): [10.0, 10.0, 10.0]})
        sleep = MagicMock()

        CollectorService.probe_latency("itu.edu.tr", plan, transport, sleep=sleep)

        self.assertEqual(sleep.call_count, 2)
        sleep.assert_called_with(60.0)

    def test_renormalized_weights_sum_to_one(self):
        weights = CollectorService.renormalize_weights(ProbePlan(), ["eu-frankfurt", "us-virginia"])

        self.assertEqual(weights, {"eu-frankfurt": 0.5, "us-virginia": 0.5})

    def test_renormalize_without_survivors_raises(self):
        with self.assertRaises(AllProbesFailedError):
            CollectorService.renormalize_weights(ProbePlan(), [])


class TestCollectWithReport(unittest.TestCase):
    """Test cases for CollectorService.collect_with_report and collect_snapshot."""

    def setUp(self):
        self.indicator_set = IndicatorService.build_default_indicator_set()

    def collect(self, transport, sources=(BACKLINKS, LIKES), plan=None, parallelism=4):
        return CollectorService.collect_with_report(
            universities(),
            list(sources),
            plan,
            transport,
            indicator_set=self.indicator_set,
            parallelism=parallelism,
            label="summer-2013",
        )

    def test_three_entities_two_sources(self):
        transport = FakeTransport(site_responses())

        report = self.collect(transport)
        snapshot = report.snapshot

        self.assertEqual(len(transport.fetches), 6)
        self.assertEqual([e.slug for e in snapshot.entities], ["anadolu", "istanbul", "gazi"])
        self.assertEqual(snapshot.entities[0].value_of("yahoo_backlinks").value, 80400.0)
        self.assertEqual(snapshot.entities[2].value_of("fb_likes").value, 31000.0)
        self.assertEqual(list(snapshot.entities[0].values), list(self.indicator_set.ids))
        self.assertTrue(snapshot.entities[0].value_of("alexa_rank").is_missing)
        self.assertEqual(snapshot.collected_at, FIXED_TIME)
        self.assertEqual(snapshot.label, "summer-2013")
        self.assertEqual(report.issues, ())

    def test_same_inputs_give_the_same_hash(self):
        hashes = {
            IndicatorService.snapshot_hash(self.collect(FakeTransport(site_responses()), parallelism=p).snapshot)
            for p in (1, 2, 8)
        }

        self.assertEqual(len(hashes), 1)

    def test_failing_source_leaves_its_column_missing(self):
        responses = {
            url: answer for url, answer in site_responses().items() if "graph.example" not in url
        }

        with self.assertLogs("business_logic.services.collector_service", level="WARNING"):
            report = self.collect(FakeTransport(responses))

        for record in report.snapshot.entities:
            self.assertTrue(record.value_of("fb_likes").is_missing)
            self.assertFalse(record.value_of("yahoo_backlinks").is_missing)
        self.assertEqual([(i.slug, i.source_id) for i in report.issues], [
            ("anadolu", "facebook"),
            ("istanbul", "facebook"),
            ("gazi", "facebook"),
        ])

    def test_probe_fills_the_latency_indicator(self):
        latencies = {
            ("tr-istanbul", host): [100.0 + i] * 3 for i, host in enumerate(HOSTS.values())
        }

        report = self.collect(
            FakeTransport(site_responses(), latencies), plan=single_location_plan()
        )

        self.assertEqual(
            [e.value_of(LATENCY_INDICATOR_ID).value for e in report.snapshot.entities],
            [100.0, 101.0, 102.0],
        )

    def test_probe_only_collection(self):
        latencies = {("tr-istanbul", host): [50.0] * 3 for host in HOSTS.values()}

        snapshot = CollectorService.collect_snapshot(
            universities(),
            [],
            single_location_plan(),
            FakeTransport(latencies=latencies),
            indicator_set=self.indicator_set,
            now=lambda: FIXED_TIME,
        )

        self.assertEqual(snapshot.collected_at, FIXED_TIME)
        self.assertEqual(snapshot.entities[1].value_of(LATENCY_INDICATOR_ID).value, 50.0)

    def test_invalid_requests_raise(self):
        transport = FakeTransport(site_responses())
        unknown_indicator = BACKLINKS.model_copy(update={"indicator_id": "pagerank"})
        unknown_rule = BACKLINKS.model_copy(update={"extraction_rule": "xpath_number"})
        bad_pattern = BACKLINKS.model_copy(update={"extraction_arg": r"Inlinks \(("})
        bad_selector = BACKLINKS.model_copy(update={"extraction_rule": "css_number", "extraction_arg": "div[["})
        no_argument = LIKES.model_copy(update={"extraction_arg": None})
        cases = {
            "no entities": lambda: CollectorService.collect_with_report([], [BACKLINKS], None, transport),
            "no parallelism": lambda: self.collect(transport, parallelism=0),
            "duplicate sources": lambda: self.collect(transport, sources=(BACKLINKS, BACKLINKS)),
            "unknown indicator": lambda: self.collect(transport, sources=(unknown_indicator,)),
            "unknown rule": lambda: self.collect(transport, sources=(unknown_rule,)),
            "malformed pattern": lambda: self.collect(transport, sources=(bad_pattern,)),
            "malformed selector": lambda: self.collect(transport, sources=(bad_selector,)),
            "missing argument": lambda: self.collect(transport, sources=(BACKLINKS, no_argument)),
            "nothing to collect": lambda: self.collect(transport, sources=()),
        }
        for name, call in cases.items():
            with self.subTest(case=name):
                with self.assertRaises(UsageError):
                    call()
        self.assertEqual(transport.fetches, [])


if __name__ == "__main__":
    unittest.main()
