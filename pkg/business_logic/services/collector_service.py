"""
Collector Service Module for the Web Reputation Index system.

This module gathers raw indicator values from the web. Each SourceDescriptor
names an endpoint template, an extraction rule and a rate limit; collecting a
value resolves the template with the entity's host, fetches it through a
transport (live or cassette) and extracts a number or boolean from the body.
Latency is measured separately by timing TCP connects from several probe
locations and combining the per-location medians with weights that favour the
Turkish vantage point.

Collection never aborts on a single failed cell: fetch and extraction
failures turn into Missing values with a logged reason and an entry in the
collection report.

Classes:
    CollectorService: Static collection, probing and snapshot assembly.

Dependencies:
    - concurrent.futures.ThreadPoolExecutor: Bounded parallel collection
    - numpy.median: Per-location latency
    - business_logic.services.rate_limiter.RateLimiter: Per-source throttling
    - business_logic.services.extraction_rules: Named body parsers
    - persistence.transport.Transport: Live or recorded network access

Example:
    >>> transport = CassetteTransport(Cassette(Path("cassettes/2013")), CassetteMode.REPLAY)
    >>> report = CollectorService.collect_with_report(entities, sources, ProbePlan(), transport)
    >>> len(report.snapshot.entities), len(report.issues)
    (3, 0)
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Callable, Optional, Sequence

import numpy as np

from business_logic.services.extraction_rules import apply_rule, check_argument
from business_logic.services.indicator_service import IndicatorService
from business_logic.services.rate_limiter import RateLimiter
from persistence.errors import (
    AllProbesFailedError,
    ExtractionError,
    FetchError,
    ProbeError,
    UsageError,
)
from persistence.models import (
    CollectionIssue,
    CollectionReport,
    EntityRecord,
    IndicatorKind,
    IndicatorSet,
    ProbePlan,
    Provenance,
    ProvenanceKind,
    RawValue,
    Snapshot,
    SourceDescriptor,
)
from persistence.settings import DEFAULT_PARALLELISM
from persistence.transport import Transport, utc_now

logger = logging.getLogger(__name__)

LATENCY_INDICATOR_ID = "speed_ping_ms"
PROBE_SOURCE_ID = "probe"


class CollectorService:
    """
    Network collection of raw indicator values.

    All methods are static; shared state (the rate limiter) is passed in, so
    one limiter can throttle every worker of a collection run.
    """

    @staticmethod
    def collect_value(
        entity: EntityRecord,
        source: SourceDescriptor,
        transport: Transport,
        kind: Optional[IndicatorKind] = None,
        limiter: Optional[RateLimiter] = None,
    ) -> RawValue:
        """
        Fetch and extract one indicator value for one entity.

        Args:
            entity: Institution to measure; its ``host`` fills the endpoint template.
            source: Where and how to fetch the value.
            transport: Live or cassette transport.
            kind: Indicator kind; boolean indicators turn numbers into ``value != 0``.
            limiter: Rate limiter honoured unless the transport is offline.

        Returns:
            RawValue: Collected value, or Missing when the fetch or the
            extraction failed (the reason is logged).
        """
        value, _ = CollectorService._collect_cell(entity, source, transport, kind, limiter)
        return value

    @staticmethod
    def _collect_cell(
        entity: EntityRecord,
        source: SourceDescriptor,
        transport: Transport,
        kind: Optional[IndicatorKind],
        limiter: Optional[RateLimiter],
    ) -> tuple[RawValue, Optional[str]]:
        failed = Provenance(kind=ProvenanceKind.COLLECTED, source_id=source.source_id)
        if not entity.host:
            return RawValue.missing(failed), "entity has no host"

        url = source.resolve(entity.host)
        if limiter is not None and not transport.offline:
            limiter.wait_if_needed(source.source_id, source.rate_limit)

        try:
            response = transport.fetch(source.source_id, url)
            if not response.ok:
                raise FetchError(f"{source.source_id}: GET {url} returned HTTP {response.status_code}")
            provenance = Provenance(
                kind=ProvenanceKind.COLLECTED,
                source_id=source.source_id,
                timestamp=response.received_at,
            )
            extracted = apply_rule(source.extraction_rule, response.text, source.extraction_arg)
        except (FetchError, ExtractionError) as e:
            logger.warning("%s for %s: %s", type(e).__name__, entity.slug, e)
            return RawValue.missing(failed), f"{type(e).__name__}: {e}"

        if isinstance(extracted, bool):
            return RawValue.boolean(extracted, provenance), None
        if kind == IndicatorKind.BOOLEAN:
            return RawValue.boolean(extracted != 0, provenance), None
        return RawValue.number(extracted, provenance), None

    @staticmethod
    def renormalize_weights(plan: ProbePlan, surviving: Sequence[str]) -> dict[str, float]:
        """
        Weights of the surviving probe locations rescaled to sum to 1.

        Raises:
            AllProbesFailedError: If no surviving location has a positive weight.
        """
        weights = {
            location.probe_id: location.weight
            for location in plan.locations
            if location.probe_id in surviving
        }
        total = sum(weights.values())
        if total <= 0:
            raise AllProbesFailedError("no probe location with a positive weight produced a measurement")
        return {probe_id: weight / total for probe_id, weight in weights.items()}

    @staticmethod
    def probe_latency(
        host: str,
        plan: ProbePlan,
        transport: Transport,
        sleep: Callable[[float], None] = time.sleep,
    ) -> float:
        """
        Weighted connect latency of a host in milliseconds.

        Each location is probed ``plan.attempts`` times; its latency is the
        median of the successful attempts. The result is the weighted sum of
        the medians. Locations without any successful attempt drop out and the
        remaining weights are renormalized.

        Raises:
            AllProbesFailedError: If no location yields a measurement.
        """
        medians: dict[str, float] = {}
        for location in plan.locations:
            if location.weight == 0:
                continue
            samples: list[float] = []
            for attempt in range(plan.attempts):
                if attempt and plan.spread_seconds and not transport.offline:
                    sleep(plan.spread_seconds)
                try:
                    samples.append(
                        transport.connect_time(location.probe_id, host, plan.port, attempt)
                    )
                except ProbeError as e:
                    logger.debug("probe %s attempt %d failed: %s", location.probe_id, attempt, e)
            if samples:
                medians[location.probe_id] = float(np.median(samples))
            else:
                logger.warning("probe location %s got no measurement for %s", location.probe_id, host)

        if not medians:
            raise AllProbesFailedError(f"every probe of {host} failed")

        weights = CollectorService.renormalize_weights(plan, list(medians))
        if len(medians) < sum(1 for location in plan.locations if location.weight > 0):
            logger.info("renormalized probe weights for %s: %s", host, weights)

        latency = sum(weights[probe_id] * medians[probe_id] for probe_id in weights)
        return min(max(latency, min(medians.values())), max(medians.values()))

    @staticmethod
    def _probe_cell(
        entity: EntityRecord, plan: ProbePlan, transport: Transport
    ) -> tuple[RawValue, Optional[str]]:
        provenance = Provenance(kind=ProvenanceKind.COLLECTED, source_id=PROBE_SOURCE_ID)
        if not entity.host:
            return RawValue.missing(provenance), "entity has no host"
        try:
            return RawValue.number(CollectorService.probe_latency(entity.host, plan, transport), provenance), None
        except AllProbesFailedError as e:
            logger.warning("latency probe for %s: %s", entity.slug, e)
            return RawValue.missing(provenance), f"AllProbesFailedError: {e}"

    @staticmethod
    def collect_with_report(
        entities: Sequence[EntityRecord],
        sources: Sequence[SourceDescriptor],
        plan: Optional[ProbePlan],
        transport: Transport,
        indicator_set: Optional[IndicatorSet] = None,
        parallelism: int = DEFAULT_PARALLELISM,
        label: str = "",
        limiter: Optional[RateLimiter] = None,
        now: Callable[[], datetime] = utc_now,
    ) -> CollectionReport:
        """
        Collect a full snapshot and report every failed cell.

        Cells are collected concurrently by at most ``parallelism`` workers.
        Assembly afterwards is single-threaded: entities keep their input
        order, values follow indicator-set order and, when several sources
        target one indicator, the first source (in the given order) with a
        value wins. The latency indicator is filled by the probe plan unless a
        source targets it. Indicators nobody collects are Missing.

        ``collected_at`` is the latest cell timestamp, so replaying a cassette
        reproduces it; ``now()`` is used only when no cell carries one.

        Raises:
            UsageError: If there are no entities, nothing to collect, a source
                targets an unknown indicator, names an unknown extraction rule,
                gives a rule a missing or malformed argument or parallelism < 1.
        """
        indicator_set = indicator_set or IndicatorService.build_default_indicator_set()
        if not entities:
            raise UsageError("no entities to collect")
        if parallelism < 1:
            raise UsageError(f"parallelism must be at least 1, got {parallelism}")
        source_ids = [source.source_id for source in sources]
        if len(set(source_ids)) != len(source_ids) or PROBE_SOURCE_ID in source_ids:
            raise UsageError(f"source ids must be unique and not '{PROBE_SOURCE_ID}'")
        unknown = sorted({s.indicator_id for s in sources} - set(indicator_set.ids))
        if unknown:
            raise UsageError(f"sources target unknown indicators: {', '.join(unknown)}")
        for source in sources:
            check_argument(source.extraction_rule, source.extraction_arg)

        targeted = {source.indicator_id for source in sources}
        probe_indicator = (
            LATENCY_INDICATOR_ID
            if plan is not None
            and LATENCY_INDICATOR_ID in indicator_set.ids
            and LATENCY_INDICATOR_ID not in targeted
            else None
        )
        if not sources and probe_indicator is None:
            raise UsageError("nothing to collect: no sources and no latency probe")

        limiter = limiter or RateLimiter()
        cells: dict[tuple[str, str], tuple[RawValue, Optional[str]]] = {}
        with ThreadPoolExecutor(max_workers=parallelism) as executor:
            futures = {}
            for entity in entities:
                for source in sources:
                    kind = indicator_set.get(source.indicator_id).kind
                    futures[(entity.slug, source.source_id)] = executor.submit(
                        CollectorService._collect_cell, entity, source, transport, kind, limiter
                    )
                if probe_indicator is not None:
                    futures[(entity.slug, PROBE_SOURCE_ID)] = executor.submit(
                        CollectorService._probe_cell, entity, plan, transport
                    )
            for key, future in futures.items():
                cells[key] = future.result()

        records: list[EntityRecord] = []
        issues: list[CollectionIssue] = []
        timestamps: list[datetime] = []
        for entity in entities:
            values: dict[str, RawValue] = {}
            for spec in indicator_set.specs:
                candidates = [
                    (source.source_id, cells[(entity.slug, source.source_id)])
                    for source in sources
                    if source.indicator_id == spec.id
                ]
                if spec.id == probe_indicator:
                    candidates.append((PROBE_SOURCE_ID, cells[(entity.slug, PROBE_SOURCE_ID)]))
                if not candidates:
                    values[spec.id] = RawValue.missing(Provenance(kind=ProvenanceKind.COLLECTED))
                    continue

                chosen = next((value for _, (value, _) in candidates if not value.is_missing), None)
                for source_id, (_, reason) in candidates:
                    if reason is not None:
                        issues.append(
                            CollectionIssue(
                                slug=entity.slug,
                                indicator_id=spec.id,
                                source_id=source_id,
                                reason=reason,
                            )
                        )
                values[spec.id] = chosen or candidates[0][1][0]
                if values[spec.id].provenance.timestamp is not None:
                    timestamps.append(values[spec.id].provenance.timestamp)
            records.append(entity.model_copy(update={"values": values}))

        snapshot = Snapshot(
            indicator_set=indicator_set,
            entities=tuple(records),
            collected_at=max(timestamps) if timestamps else now(),
            label=label,
        )
        logger.info(
            "collected %d entities x %d indicators with %d issues",
            len(records),
            indicator_set.K,
            len(issues),
        )
        return CollectionReport(snapshot=snapshot, issues=tuple(issues))

    @staticmethod
    def collect_snapshot(
        entities: Sequence[EntityRecord],
        sources: Sequence[SourceDescriptor],
        plan: Optional[ProbePlan],
        transport: Transport,
        **options,
    ) -> Snapshot:
        """Collect a snapshot; see ``collect_with_report`` for options and ordering."""
        return CollectorService.collect_with_report(
            entities, sources, plan, transport, **options
        ).snapshot
