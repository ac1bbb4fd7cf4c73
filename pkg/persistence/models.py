"""
Data models for the Web Reputation Index system using Pydantic.

This module defines the value objects that flow between the layers of the
application: the indicator universe, entity records and snapshots on the input
side; normalized series, index results, statistics and rankings on the output
side; and the descriptors used by the collectors. All models use Pydantic for
validation and JSON serialization. Models that the pipeline shares between
threads are frozen.

Classes:
    IndicatorSpec, IndicatorSet: The indicator universe (houses C and K).
    Provenance, RawValue: One raw indicator value and where it came from.
    EntityRecord, Snapshot: Institutions and a dated collection of their values.
    ValidationWarning: Soft finding produced by snapshot validation.
    NormalizedSeries, SignedSeries: Min-max normalized and polarity-signed series.
    IndexResult, SeriesStats, PipelineResult: Pipeline outputs.
    RankingEntry, Ranking: Ordered rankings.
    SourceDescriptor, ProbeLocation, ProbePlan: Collector configuration.
    CollectionIssue, CollectionReport: Collector outputs.
    AppendixEntry, AppendixFixture: The published index table.
    HistogramBin, ScatterPoint: Distribution emitters.
    RunConfig: Command-line run configuration.

Dependencies:
    - pydantic.BaseModel: Validation, immutability and serialization
    - persistence.settings: Environment-backed defaults

Example:
    >>> spec = IndicatorSpec(
    ...     id="alexa_bounce",
    ...     name="Alexa bounce rate",
    ...     kind=IndicatorKind.PERCENTAGE,
    ...     polarity=Polarity.NEGATIVE,
    ... )
    >>> value = RawValue.number(90.0)
    >>> value.as_number()
    90.0
"""

import math
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    StrictBool,
    field_validator,
    model_validator,
)

from persistence.settings import DEFAULT_PARALLELISM, PROBE_PORT


class IndicatorKind(str, Enum):
    COUNT = "count"
    BOOLEAN = "boolean"
    CURRENCY_USD = "currency_usd"
    MILLISECONDS = "milliseconds"
    PERCENTAGE = "percentage"
    RATIO = "ratio"


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class ProvenanceKind(str, Enum):
    COLLECTED = "collected"
    FILE_IMPORT = "file_import"
    FIXTURE = "fixture"


class PopulationMode(str, Enum):
    """How WRI is divided by student population.

    FORMULA_LITERAL divides by the raw population (1 when the population is 0).
    TEXT_LITERAL divides by the min-max normalized population.
    """

    FORMULA_LITERAL = "formula"
    TEXT_LITERAL = "text"


class StdConvention(str, Enum):
    POPULATION = "population"
    SAMPLE = "sample"


class ResultFlag(str, Enum):
    WRI_OUT_OF_RANGE = "WriOutOfRange"
    ZERO_POPULATION_GUARD = "ZeroPopulationGuard"
    DEGENERATE_INDICATORS_EXCLUDED = "DegenerateIndicatorsExcluded"


class CassetteMode(str, Enum):
    RECORD = "record"
    REPLAY = "replay"
    PASSTHROUGH = "passthrough"


class DataFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# ---------------------------------------------------------------------------
# Indicator model
# ---------------------------------------------------------------------------


class IndicatorSpec(BaseModel):
    """
    Identity, kind and polarity of one web indicator.

    Attributes:
        id (str): Short stable identifier such as ``fb_likes``.
        name (str): Human label.
        kind (IndicatorKind): Unit family of the raw values.
        polarity (Polarity): Whether larger values raise or lower reputation.
        collector_hint (Optional[str]): Source identifier the value usually comes from.
        lower_bound, upper_bound (Optional[float]): Plausibility bounds checked by
            snapshot validation. Values outside only produce warnings.
        published_max, published_mean (Optional[float]): Figures reported for the
            2013 Turkish university data set, kept as reference metadata.
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    name: str
    kind: IndicatorKind
    polarity: Polarity = Polarity.POSITIVE
    collector_hint: Optional[str] = None
    lower_bound: Optional[float] = None
    upper_bound: Optional[float] = None
    published_max: Optional[float] = None
    published_mean: Optional[float] = None


class IndicatorSet(BaseModel):
    """
    Ordered indicator universe.

    ``K`` is the total number of indicators and ``C`` the number of positive
    ones. The order of ``specs`` is the fixed summation order of the WRI.
    """

    model_config = ConfigDict(frozen=True)

    specs: tuple[IndicatorSpec, ...]

    @model_validator(mode="after")
    def _check_universe(self) -> "IndicatorSet":
        ids = [spec.id for spec in self.specs]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ValueError(f"duplicate indicator ids: {', '.join(duplicates)}")
        if not any(spec.polarity == Polarity.POSITIVE for spec in self.specs):
            raise ValueError("an indicator set needs at least one positive indicator")
        return self

    @property
    def K(self) -> int:
        return len(self.specs)

    @property
    def C(self) -> int:
        return sum(1 for spec in self.specs if spec.polarity == Polarity.POSITIVE)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(spec.id for spec in self.specs)

    def get(self, indicator_id: str) -> IndicatorSpec:
        for spec in self.specs:
            if spec.id == indicator_id:
                return spec
        raise KeyError(indicator_id)

    def without(self, *indicator_ids: str) -> "IndicatorSet":
        """Return a copy of the set with the given indicators removed."""
        return IndicatorSet(
            specs=tuple(s for s in self.specs if s.id not in indicator_ids)
        )


class Provenance(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ProvenanceKind
    source_id: Optional[str] = None
    timestamp: Optional[datetime] = None


class RawValue(BaseModel):
    """
    A raw indicator value: a number, a boolean, or Missing (``value is None``).

    Booleans enter the numeric pipeline as exactly 0.0 or 1.0. Non-finite
    numbers are accepted here so that snapshot validation can report them.
    """

    model_config = ConfigDict(frozen=True)

    value: Optional[Union[StrictBool, float]] = None
    provenance: Provenance = Provenance(kind=ProvenanceKind.FILE_IMPORT)

    @classmethod
    def number(
        cls, value: float, provenance: Optional[Provenance] = None
    ) -> "RawValue":
        return cls(value=float(value), provenance=provenance or Provenance(kind=ProvenanceKind.FILE_IMPORT))

    @classmethod
    def boolean(cls, value: bool, provenance: Optional[Provenance] = None) -> "RawValue":
        return cls(value=bool(value), provenance=provenance or Provenance(kind=ProvenanceKind.FILE_IMPORT))

    @classmethod
    def missing(cls, provenance: Optional[Provenance] = None) -> "RawValue":
        return cls(value=None, provenance=provenance or Provenance(kind=ProvenanceKind.FILE_IMPORT))

    @property
    def is_missing(self) -> bool:
        return self.value is None

    @property
    def is_boolean(self) -> bool:
        return isinstance(self.value, bool)

    def as_number(self) -> Optional[float]:
        if self.value is None:
            return None
        if isinstance(self.value, bool):
            return 1.0 if self.value else 0.0
        return float(self.value)


class EntityRecord(BaseModel):
    """
    One institution.

    Attributes:
        name (str): Display name, e.g. "İstanbul Üniversitesi".
        slug (str): ASCII key unique within a snapshot.
        population (int): Number of students (P); 0 for newly founded institutions.
        host (Optional[str]): Web host measured by the collectors.
        values (dict[str, RawValue]): Raw values keyed by indicator id.
    """

    model_config = ConfigDict(frozen=True)

    name: str
    slug: str = Field(min_length=1)
    population: int = Field(ge=0)
    host: Optional[str] = None
    values: dict[str, RawValue] = Field(default_factory=dict)

    def value_of(self, indicator_id: str) -> RawValue:
        """Return the raw value for an indicator, Missing when absent."""
        return self.values.get(indicator_id) or RawValue.missing()


class Snapshot(BaseModel):
    """A dated collection of entity records over one indicator universe."""

    model_config = ConfigDict(frozen=True)

    indicator_set: IndicatorSet
    entities: tuple[EntityRecord, ...]
    collected_at: datetime
    label: str = ""

    @model_validator(mode="after")
    def _check_structure(self) -> "Snapshot":
        slugs = [entity.slug for entity in self.entities]
        duplicates = sorted({s for s in slugs if slugs.count(s) > 1})
        if duplicates:
            raise ValueError(f"duplicate entity slugs: {', '.join(duplicates)}")
        known = set(self.indicator_set.ids)
        for entity in self.entities:
            unknown = sorted(set(entity.values) - known)
            if unknown:
                raise ValueError(
                    f"entity '{entity.slug}' has values for unknown indicators: {', '.join(unknown)}"
                )
        return self


class ValidationWarning(BaseModel):
    model_config = ConfigDict(frozen=True)

    slug: str
    indicator_id: str
    code: str
    message: str


# ---------------------------------------------------------------------------
# Pipeline outputs
# ---------------------------------------------------------------------------


class NormalizedSeries(BaseModel):
    """
    Min-max normalized values of one indicator, keyed by entity slug.

    When ``degenerate`` is set the source series was constant and every value
    is 0.
    """

    model_config = ConfigDict(frozen=True)

    indicator_id: str
    values: dict[str, float]
    source_min: float
    source_max: float
    degenerate: bool = False


class SignedSeries(BaseModel):
    """Normalized values after polarity: [0,1] for positive, [-1,0] for negative."""

    model_config = ConfigDict(frozen=True)

    indicator_id: str
    polarity: Polarity
    values: dict[str, float]
    degenerate: bool = False


class IndexResult(BaseModel):
    """
    Per-entity output of the index pipeline.

    ``wri`` and ``pop_normalized`` are None for results that only carry a
    published final index (the appendix fixture).
    """

    model_config = ConfigDict(frozen=True)

    slug: str
    name: str
    wri: Optional[float] = None
    pop_normalized: Optional[float] = None
    final_index: float
    flags: tuple[ResultFlag, ...] = ()
    signed_values: dict[str, float] = Field(default_factory=dict)

    @field_validator("flags")
    @classmethod
    def _sort_flags(cls, flags: tuple[ResultFlag, ...]) -> tuple[ResultFlag, ...]:
        return tuple(sorted(set(flags), key=lambda flag: flag.value))


class SeriesStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    max: float
    min: float
    std: float = Field(ge=0.0)
    count: int = Field(ge=1)
    convention: StdConvention = StdConvention.POPULATION


class PipelineResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    results: tuple[IndexResult, ...]
    stats: SeriesStats
    population_stats: SeriesStats
    degenerate_ids: tuple[str, ...] = ()
    mode: PopulationMode = PopulationMode.FORMULA_LITERAL


class RankingEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    rank: int = Field(ge=1)
    slug: str
    name: str
    value: float


class Ranking(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: tuple[RankingEntry, ...]
    label: str = ""

    @property
    def slugs(self) -> tuple[str, ...]:
        return tuple(entry.slug for entry in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


# ---------------------------------------------------------------------------
# Collectors
# ---------------------------------------------------------------------------


class SourceDescriptor(BaseModel):
    """
    Where and how one indicator value is fetched.

    Attributes:
        source_id (str): Stable name of the source, used as cassette key.
        indicator_id (str): Indicator filled by this source.
        endpoint_template (str): URL containing exactly one ``{host}`` placeholder.
        extraction_rule (str): Name of a registered extraction rule.
        extraction_arg (Optional[str]): Rule argument (regex, CSS selector, JSON path).
        rate_limit (float): Maximum requests per second to this source.
    """

    model_config = ConfigDict(frozen=True)

    source_id: str = Field(min_length=1)
    indicator_id: str
    endpoint_template: str
    extraction_rule: str
    extraction_arg: Optional[str] = None
    rate_limit: float = Field(default=1.0, gt=0.0)

    @field_validator("endpoint_template")
    @classmethod
    def _one_placeholder(cls, template: str) -> str:
        if template.count("{host}") != 1:
            raise ValueError("endpoint template must contain exactly one {host} placeholder")
        return template

    def resolve(self, host: str) -> str:
        return self.endpoint_template.replace("{host}", host)


class ProbeLocation(BaseModel):
    model_config = ConfigDict(frozen=True)

    probe_id: str = Field(min_length=1)
    weight: float = Field(ge=0.0)


DEFAULT_PROBE_LOCATIONS: tuple[ProbeLocation, ...] = (
    ProbeLocation(probe_id="tr-istanbul", weight=0.5),
    ProbeLocation(probe_id="eu-frankfurt", weight=0.125),
    ProbeLocation(probe_id="us-virginia", weight=0.125),
    ProbeLocation(probe_id="asia-singapore", weight=0.125),
    ProbeLocation(probe_id="sa-sao-paulo", weight=0.125),
)


class ProbePlan(BaseModel):
    """
    Multi-location latency probing plan.

    Weights are non-negative and sum to 1. ``spread_seconds`` is the pause
    between consecutive attempts at one location, so that attempts happen at
    distinct times.
    """

    model_config = ConfigDict(frozen=True)

    locations: tuple[ProbeLocation, ...] = DEFAULT_PROBE_LOCATIONS
    attempts: int = Field(default=3, ge=1)
    spread_seconds: float = Field(default=0.0, ge=0.0)
    port: int = Field(default=PROBE_PORT, ge=1, le=65535)

    @model_validator(mode="after")
    def _check_weights(self) -> "ProbePlan":
        if not self.locations:
            raise ValueError("a probe plan needs at least one location")
        total = sum(location.weight for location in self.locations)
        if not math.isclose(total, 1.0, abs_tol=1e-9):
            raise ValueError(f"probe weights must sum to 1, got {total}")
        return self


class CollectionIssue(BaseModel):
    model_config = ConfigDict(frozen=True)

    slug: str
    indicator_id: str
    source_id: Optional[str] = None
    reason: str


class CollectionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    snapshot: Snapshot
    issues: tuple[CollectionIssue, ...] = ()


# ---------------------------------------------------------------------------
# Dataset I/O
# ---------------------------------------------------------------------------


class AppendixEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    normalized_index: float


class AppendixFixture(BaseModel):
    """
    Published normalized index table of the Turkish universities.

    ``declared_count`` is the number of universities stated in the summary
    statistics; ``row_count`` is the number of transcribed rows.
    """

    model_config = ConfigDict(frozen=True)

    entries: tuple[AppendixEntry, ...]
    provenance: str = "published appendix"
    declared_count: int = 170

    @property
    def row_count(self) -> int:
        return len(self.entries)

    @property
    def count_discrepancy(self) -> bool:
        return self.row_count != self.declared_count

    @property
    def values(self) -> list[float]:
        return [entry.normalized_index for entry in self.entries]


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    bin_low: float
    bin_high: float
    count: int


class ScatterPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    ordinal: int
    value: float


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------


class RunConfig(BaseModel):
    """
    Everything a command needs for one run.

    Defaults divide WRI by the raw population (formula mode), use the
    default indicator set and report the population standard deviation.
    """

    model_config = ConfigDict(frozen=True)

    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    format: DataFormat = DataFormat.CSV
    population_mode: PopulationMode = PopulationMode.FORMULA_LITERAL
    std_convention: StdConvention = StdConvention.POPULATION
    indicators_path: Optional[Path] = None
    sources_path: Optional[Path] = None
    cassette_dir: Optional[Path] = None
    cassette_mode: CassetteMode = CassetteMode.PASSTHROUGH
    parallelism: int = Field(default=DEFAULT_PARALLELISM, ge=1)
    probe_enabled: bool = True
    probe_attempts: int = Field(default=3, ge=1)
    probe_locations: tuple[ProbeLocation, ...] = DEFAULT_PROBE_LOCATIONS
    from_fixture: bool = False
    top: Optional[int] = None
    bottom: Optional[int] = None
    bins: int = Field(default=10, ge=1)
    histogram_path: Optional[Path] = None
    scatter_path: Optional[Path] = None
    compare_modes: bool = False
    decimal_comma: bool = False
    label: str = ""

    def probe_plan(self) -> ProbePlan:
        return ProbePlan(locations=self.probe_locations, attempts=self.probe_attempts)
