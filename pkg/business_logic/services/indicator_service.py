"""
Indicator Service Module for the Web Reputation Index system.

This module owns the indicator universe used to score institutions and the
soft validation of raw snapshots against plausibility bounds. The default
universe holds the sixteen web indicators gathered for the 2013 survey of
Turkish university web sites: Facebook presence and likes, estimated site
value, backlinks and indexed pages from two search engines, directory listing,
daily unique visitors, duplicate-content hits, connect latency, Alexa rank and
bounce rate, page views per user, time on site and sites linking in.

Exactly two indicators are negative: a larger Alexa rank and a larger bounce
rate mean a worse reputation. Latency is kept positive so the default set
matches the published index definition; an indicator set loaded from JSON can
flip it.

Classes:
    IndicatorService: Builds the default indicator set, validates snapshots and
        computes a stable snapshot hash.

Dependencies:
    - hashlib, json: Canonical snapshot hashing
    - math.isfinite: Hard rejection of NaN and infinite numbers
    - persistence.models: IndicatorSpec, IndicatorSet, Snapshot, ValidationWarning
    - persistence.errors.NonFiniteValueError: Raised for non-finite numbers

Example:
    >>> indicator_set = IndicatorService.build_default_indicator_set()
    >>> indicator_set.K, indicator_set.C
    (16, 14)
    >>> warnings = IndicatorService.validate_snapshot(snapshot)
    >>> [w.code for w in warnings]
    ['missing', 'out_of_range']
"""

import hashlib
import json
import logging
import math
from typing import Optional

from persistence.errors import NonFiniteValueError
from persistence.models import (
    IndicatorKind,
    IndicatorSet,
    IndicatorSpec,
    Polarity,
    Snapshot,
    ValidationWarning,
)

logger = logging.getLogger(__name__)

MAX_PLAUSIBLE_PING_MS = 60_000.0

# Bounds applied when an IndicatorSpec carries none of its own.
_KIND_BOUNDS: dict[IndicatorKind, tuple[Optional[float], Optional[float]]] = {
    IndicatorKind.COUNT: (0.0, None),
    IndicatorKind.CURRENCY_USD: (0.0, None),
    IndicatorKind.MILLISECONDS: (0.0, MAX_PLAUSIBLE_PING_MS),
    IndicatorKind.PERCENTAGE: (0.0, 100.0),
    IndicatorKind.RATIO: (0.0, None),
    IndicatorKind.BOOLEAN: (None, None),
}


class IndicatorService:
    """
    Indicator universe and snapshot validation.

    All methods are static and pure; the service holds no state and can be
    used from any thread.
    """

    @staticmethod
    def build_default_indicator_set() -> IndicatorSet:
        """
        Build the sixteen-indicator default universe.

        Published maxima and means from the 2013 Turkish university survey are
        attached as metadata; they are not used by the index computation.

        Returns:
            IndicatorSet: K = 16, C = 14, negatives ``alexa_rank`` and ``alexa_bounce``.
        """
        specs = (
            IndicatorSpec(
                id="fb_has_page",
                name="Has a Facebook page",
                kind=IndicatorKind.BOOLEAN,
                collector_hint="facebook",
            ),
            IndicatorSpec(
                id="fb_likes",
                name="Facebook like count",
                kind=IndicatorKind.COUNT,
                collector_hint="facebook",
                published_max=71114,
                published_mean=7817,
            ),
            IndicatorSpec(
                id="site_value_usd",
                name="Estimated value of the site",
                kind=IndicatorKind.CURRENCY_USD,
                collector_hint="site_valuation",
                published_max=326642,
                published_mean=11965,
            ),
            IndicatorSpec(
                id="yahoo_backlinks",
                name="Yahoo! backlinks",
                kind=IndicatorKind.COUNT,
                collector_hint="yahoo_site_explorer",
                published_max=80400,
                published_mean=7749,
            ),
            IndicatorSpec(
                id="google_backlinks",
                name="Google backlinks",
                kind=IndicatorKind.COUNT,
                collector_hint="google",
                published_max=84_000_000,
                published_mean=17_000_000,
            ),
            IndicatorSpec(
                id="dmoz_listed",
                name="Listed in the DMOZ directory",
                kind=IndicatorKind.BOOLEAN,
                collector_hint="dmoz",
            ),
            IndicatorSpec(
                id="google_indexed",
                name="Google indexed pages",
                kind=IndicatorKind.COUNT,
                collector_hint="google",
                published_max=9_000_000,
                published_mean=234883,
            ),
            IndicatorSpec(
                id="yahoo_indexed",
                name="Yahoo! indexed pages",
                kind=IndicatorKind.COUNT,
                collector_hint="yahoo_site_explorer",
                published_max=4_400_000,
                published_mean=34327,
            ),
            IndicatorSpec(
                id="daily_unique_visitors",
                name="Daily unique visitors",
                kind=IndicatorKind.COUNT,
                collector_hint="traffic_estimator",
                published_max=19718,
                published_mean=757,
            ),
            IndicatorSpec(
                id="plagiarism_count",
                name="Duplicate content hits",
                kind=IndicatorKind.COUNT,
                collector_hint="plagiarism_robot",
                published_max=10,
                published_mean=4,
            ),
            IndicatorSpec(
                id="speed_ping_ms",
                name="Weighted connect latency",
                kind=IndicatorKind.MILLISECONDS,
                collector_hint="probe",
                upper_bound=MAX_PLAUSIBLE_PING_MS,
                published_max=3208,
                published_mean=240,
            ),
            IndicatorSpec(
                id="alexa_rank",
                name="Alexa traffic rank",
                kind=IndicatorKind.COUNT,
                polarity=Polarity.NEGATIVE,
                collector_hint="alexa",
                lower_bound=1,
                published_max=26_992_405,
            ),
            IndicatorSpec(
                id="alexa_bounce",
                name="Alexa bounce rate",
                kind=IndicatorKind.PERCENTAGE,
                polarity=Polarity.NEGATIVE,
                collector_hint="alexa",
                lower_bound=0,
                upper_bound=100,
                published_max=90,
            ),
            IndicatorSpec(
                id="pageviews_per_user",
                name="Page views per user",
                kind=IndicatorKind.RATIO,
                collector_hint="alexa",
                published_max=6.40,
                published_mean=1.83,
            ),
            IndicatorSpec(
                id="time_on_site_s",
                name="Daily time on site (seconds)",
                kind=IndicatorKind.RATIO,
                collector_hint="alexa",
                published_max=780,
                published_mean=240,
            ),
            IndicatorSpec(
                id="sites_linking_in",
                name="Sites linking in",
                kind=IndicatorKind.COUNT,
                collector_hint="alexa",
                published_max=9200,
                published_mean=908,
            ),
        )
        return IndicatorSet(specs=specs)

    @staticmethod
    def validate_snapshot(snapshot: Snapshot) -> list[ValidationWarning]:
        """
        Check every (entity, indicator) cell of a snapshot.

        Warnings are produced in entity order, then indicator-set order:

        - ``missing``: the value is Missing.
        - ``not_boolean``: a boolean indicator holds a number, or a numeric
          indicator holds a boolean.
        - ``out_of_range``: a number lies outside the indicator's bounds.

        The snapshot is never modified.

        Raises:
            NonFiniteValueError: If any number is NaN or infinite.
        """
        warnings: list[ValidationWarning] = []
        for entity in snapshot.entities:
            for spec in snapshot.indicator_set.specs:
                raw = entity.value_of(spec.id)
                if raw.is_missing:
                    warnings.append(
                        ValidationWarning(
                            slug=entity.slug,
                            indicator_id=spec.id,
                            code="missing",
                            message=f"{spec.name} is missing",
                        )
                    )
                    continue

                if raw.is_boolean != (spec.kind == IndicatorKind.BOOLEAN):
                    expected = "a boolean" if spec.kind == IndicatorKind.BOOLEAN else "a number"
                    warnings.append(
                        ValidationWarning(
                            slug=entity.slug,
                            indicator_id=spec.id,
                            code="not_boolean",
                            message=f"{spec.name} should be {expected}, got {raw.value!r}",
                        )
                    )
                    continue
                if raw.is_boolean:
                    continue

                value = raw.as_number()
                if not math.isfinite(value):
                    raise NonFiniteValueError(
                        f"entity '{entity.slug}' has a non-finite {spec.id}: {value}"
                    )

                lower, upper = IndicatorService.bounds_for(spec)
                if (lower is not None and value < lower) or (upper is not None and value > upper):
                    warnings.append(
                        ValidationWarning(
                            slug=entity.slug,
                            indicator_id=spec.id,
                            code="out_of_range",
                            message=(
                                f"{spec.name} = {value:g} is outside "
                                f"[{'-inf' if lower is None else f'{lower:g}'}, "
                                f"{'inf' if upper is None else f'{upper:g}'}]"
                            ),
                        )
                    )
        return warnings

    @staticmethod
    def bounds_for(spec: IndicatorSpec) -> tuple[Optional[float], Optional[float]]:
        """Plausibility bounds of an indicator: its own, else the defaults of its kind."""
        kind_lower, kind_upper = _KIND_BOUNDS[spec.kind]
        lower = spec.lower_bound if spec.lower_bound is not None else kind_lower
        upper = spec.upper_bound if spec.upper_bound is not None else kind_upper
        return lower, upper

    @staticmethod
    def snapshot_hash(snapshot: Snapshot) -> str:
        """SHA-256 of the canonical JSON form of a snapshot (sorted keys, no whitespace)."""
        canonical = json.dumps(
            snapshot.model_dump(mode="json"),
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
