"""
File-based dataset store for the Web Reputation Index system.

This module reads and writes every file the application exchanges with the
outside world: snapshots, index results with their statistics, indicator-set
and source overrides, and histogram/scatter exports. It replaces a database
layer; all state lives in plain UTF-8 files with dot decimals.

Formats:
    Snapshot CSV:  slug,name,population[,host],<indicator ids...>
                   An empty indicator cell is Missing; booleans are true/false.
                   An empty slug is derived from the name. Values only: per-cell
                   provenance and the collection time are not stored, so a
                   reload gets FileImport provenance and the file mtime.
    Snapshot JSON: the Snapshot model as one JSON document, every field kept.
    Results CSV:   rank,slug,name,wri,pop_normalized,final_index,flags
                   with 6 decimal places; statistics in ``<stem>.stats.csv``.
    Results JSON:  {"results": [...], "stats": {...}} with the same rounding.
    Histogram CSV: bin_low,bin_high,count
    Scatter CSV:   ordinal,value

Classes:
    DatasetStore: Load and save operations; writes to stdout when no path is given.

Dependencies:
    - csv, json: File formats
    - pydantic.ValidationError: Converted into DatasetParseError/SchemaError
    - persistence.models: Snapshot, IndexResult, SeriesStats and related models

Example:
    >>> store = DatasetStore()
    >>> snapshot = store.load_snapshot(Path("universities.csv"), DataFormat.CSV, indicator_set)
    >>> store.save_results(ordered_results, stats, Path("results.csv"), DataFormat.CSV)
"""

import csv
import io
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import TypeAdapter, ValidationError

from persistence.errors import DatasetIoError, DatasetParseError, SchemaError, UsageError
from persistence.models import (
    DataFormat,
    EntityRecord,
    HistogramBin,
    IndexResult,
    IndicatorKind,
    IndicatorSet,
    IndicatorSpec,
    Provenance,
    ProvenanceKind,
    RawValue,
    ResultFlag,
    ScatterPoint,
    SeriesStats,
    Snapshot,
    SourceDescriptor,
)
from persistence.naming import slugify

logger = logging.getLogger(__name__)

ENTITY_COLUMNS = ("slug", "name", "population")
OPTIONAL_ENTITY_COLUMNS = ("host",)
RESULT_COLUMNS = ("rank", "slug", "name", "wri", "pop_normalized", "final_index", "flags")
STATS_COLUMNS = ("mean", "max", "min", "std", "count", "convention")

_TRUE = {"true", "1", "yes"}
_FALSE = {"false", "0", "no"}


def format_decimal(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def round_decimal(value: Optional[float]) -> Optional[float]:
    return None if value is None else round(value, 6)


def stats_sidecar_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.stats.csv")


def _location(error: ValidationError) -> str:
    first = error.errors()[0]
    return f"{'.'.join(str(part) for part in first['loc'])}: {first['msg']}"


class DatasetStore:
    """
    Load/save operations for every file format.

    The store holds no state and may be used from several threads on
    distinct paths.
    """

    # ------------------------------------------------------------------
    # Low-level helpers
    # ------------------------------------------------------------------

    @staticmethod
    def _read_text(path: Path) -> str:
        if not path.exists():
            raise UsageError(f"input file not found: {path}")
        try:
            return path.read_text(encoding="utf-8-sig")
        except OSError as e:
            raise DatasetIoError(f"cannot read {path}: {e}") from e

    @staticmethod
    def _write_text(text: str, path: Optional[Path]) -> None:
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8", newline="")
        except OSError as e:
            raise DatasetIoError(f"cannot write {path}: {e}") from e

    @staticmethod
    def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()

    @staticmethod
    def _csv_rows(text: str, path: Path) -> tuple[list[str], list[tuple[int, dict[str, str]]]]:
        reader = csv.DictReader(io.StringIO(text), restval="")
        if reader.fieldnames is None:
            raise DatasetParseError(f"{path} is empty")
        reader.fieldnames = [name.strip() for name in reader.fieldnames]
        rows = []
        try:
            for row_number, row in enumerate(reader, start=1):
                if None in row:
                    raise DatasetParseError(f"{path}: too many cells", row=row_number)
                rows.append((row_number, row))
        except csv.Error as e:
            raise DatasetParseError(f"{path}: {e}", row=reader.line_num - 1) from e
        return list(reader.fieldnames), rows

    # ------------------------------------------------------------------
    # Snapshots
    # ------------------------------------------------------------------

    def load_snapshot(
        self,
        path: Path,
        format: DataFormat,
        indicator_set: IndicatorSet,
        label: Optional[str] = None,
    ) -> Snapshot:
        """
        Load a snapshot from CSV or JSON.

        CSV values get FileImport provenance. CSV files carry no collection
        time, so ``collected_at`` is the file modification time and the label
        defaults to the file stem. A JSON snapshot carries its own indicator
        set; ``indicator_set`` is used for CSV only.

        Raises:
            UsageError: If the file does not exist.
            DatasetIoError: If the file cannot be read.
            SchemaError: If a CSV header names an unknown indicator or lacks a required column.
            DatasetParseError: If a cell or document cannot be parsed (with row/column).
        """
        text = self._read_text(path)
        if format == DataFormat.JSON:
            try:
                snapshot = Snapshot.model_validate_json(text)
            except ValidationError as e:
                raise DatasetParseError(f"{path}: invalid snapshot ({_location(e)})") from e
            return snapshot if label is None else snapshot.model_copy(update={"label": label})
        return self._load_snapshot_csv(text, path, indicator_set, label)

    def _load_snapshot_csv(
        self, text: str, path: Path, indicator_set: IndicatorSet, label: Optional[str]
    ) -> Snapshot:
        header, rows = self._csv_rows(text, path)
        missing = [column for column in ENTITY_COLUMNS if column not in header]
        if missing:
            raise SchemaError(f"{path}: missing required columns: {', '.join(missing)}")
        known = set(ENTITY_COLUMNS) | set(OPTIONAL_ENTITY_COLUMNS) | set(indicator_set.ids)
        unknown = [column for column in header if column not in known]
        if unknown:
            raise SchemaError(f"{path}: unknown indicator columns: {', '.join(unknown)}")

        indicator_columns = [column for column in header if column in indicator_set.ids]
        entities = []
        for row_number, row in rows:
            values = {
                indicator_id: self._parse_cell(
                    row[indicator_id], indicator_set.get(indicator_id), row_number
                )
                for indicator_id in indicator_columns
            }
            name = row["name"].strip()
            try:
                population = int(row["population"].strip())
            except ValueError:
                raise DatasetParseError(
                    f"{path}: expected a whole number of students, got {row['population']!r}",
                    row=row_number,
                    column="population",
                ) from None
            try:
                slug = row["slug"].strip() or slugify(name)
                entities.append(
                    EntityRecord(
                        name=name,
                        slug=slug,
                        population=population,
                        host=(row.get("host") or "").strip() or None,
                        values=values,
                    )
                )
            except ValidationError as e:
                column = str(e.errors()[0]["loc"][0])
                raise DatasetParseError(f"{path}: {_location(e)}", row=row_number, column=column) from e
            except ValueError as e:
                raise DatasetParseError(f"{path}: {e}", row=row_number, column="slug") from e

        try:
            collected_at = datetime.fromtimestamp(path.stat().st_mtime, tz=timezone.utc)
            return Snapshot(
                indicator_set=indicator_set,
                entities=tuple(entities),
                collected_at=collected_at,
                label=path.stem if label is None else label,
            )
        except ValidationError as e:
            raise DatasetParseError(f"{path}: {_location(e)}") from e

    @staticmethod
    def _parse_cell(cell: str, spec: IndicatorSpec, row_number: int) -> RawValue:
        provenance = Provenance(kind=ProvenanceKind.FILE_IMPORT)
        text = cell.strip()
        if not text:
            return RawValue.missing(provenance)
        if spec.kind == IndicatorKind.BOOLEAN:
            lowered = text.lower()
            if lowered in _TRUE:
                return RawValue.boolean(True, provenance)
            if lowered in _FALSE:
                return RawValue.boolean(False, provenance)
            raise DatasetParseError(f"expected true/false, got {text!r}", row=row_number, column=spec.id)
        try:
            return RawValue.number(float(text), provenance)
        except ValueError:
            raise DatasetParseError(f"expected a number, got {text!r}", row=row_number, column=spec.id) from None

    def save_snapshot(self, snapshot: Snapshot, path: Optional[Path], format: DataFormat) -> None:
        """
        Write a snapshot as CSV or JSON (stdout when ``path`` is None).

        CSV writes every indicator of the set; numbers use the shortest text
        that reads back to the same float. CSV drops provenance and
        ``collected_at``; use JSON to keep a collected snapshot intact.
        """
        if format == DataFormat.JSON:
            self._write_text(snapshot.model_dump_json(indent=2) + "\n", path)
            return

        with_host = any(entity.host for entity in snapshot.entities)
        header = list(ENTITY_COLUMNS) + (["host"] if with_host else []) + list(snapshot.indicator_set.ids)
        rows = []
        for entity in snapshot.entities:
            row = [entity.slug, entity.name, str(entity.population)]
            if with_host:
                row.append(entity.host or "")
            for indicator_id in snapshot.indicator_set.ids:
                raw = entity.value_of(indicator_id)
                if raw.is_missing:
                    row.append("")
                elif raw.is_boolean:
                    row.append("true" if raw.value else "false")
                else:
                    row.append(repr(float(raw.value)))
            rows.append(row)
        self._write_text(self._csv_text(header, rows), path)

    # ------------------------------------------------------------------
    # Results
    # ------------------------------------------------------------------

    def save_results(
        self,
        results: Sequence[IndexResult],
        stats: SeriesStats,
        path: Optional[Path],
        format: DataFormat,
    ) -> None:
        """
        Write rank-ordered results and their statistics.

        ``results`` must already be in rank order; the rank column is the
        1-based position. CSV statistics go to ``<stem>.stats.csv`` next to
        the results file (and are not written when results go to stdout).

        Raises:
            UsageError: If ``results`` is empty.
            DatasetIoError: If a file cannot be written.
        """
        if not results:
            raise UsageError("no results to save")

        if format == DataFormat.JSON:
            document = {
                "results": [
                    {
                        "rank": rank,
                        "slug": result.slug,
                        "name": result.name,
                        "wri": round_decimal(result.wri),
                        "pop_normalized": round_decimal(result.pop_normalized),
                        "final_index": round_decimal(result.final_index),
                        "flags": [flag.value for flag in result.flags],
                    }
                    for rank, result in enumerate(results, start=1)
                ],
                "stats": {
                    "mean": round_decimal(stats.mean),
                    "max": round_decimal(stats.max),
                    "min": round_decimal(stats.min),
                    "std": round_decimal(stats.std),
                    "count": stats.count,
                    "convention": stats.convention.value,
                },
            }
            self._write_text(json.dumps(document, indent=2, ensure_ascii=False) + "\n", path)
            return

        rows = [
            [
                str(rank),
                result.slug,
                result.name,
                format_decimal(result.wri),
                format_decimal(result.pop_normalized),
                format_decimal(result.final_index),
                ";".join(flag.value for flag in result.flags),
            ]
            for rank, result in enumerate(results, start=1)
        ]
        self._write_text(self._csv_text(RESULT_COLUMNS, rows), path)
        if path is not None:
            stats_row = [
                format_decimal(stats.mean),
                format_decimal(stats.max),
                format_decimal(stats.min),
                format_decimal(stats.std),
                str(stats.count),
                stats.convention.value,
            ]
            self._write_text(self._csv_text(STATS_COLUMNS, [stats_row]), stats_sidecar_path(path))

    def load_results(
        self, path: Path, format: DataFormat
    ) -> tuple[list[IndexResult], Optional[SeriesStats]]:
        """
        Read results written by ``save_results``.

        Returns:
            tuple: Results in file order and the statistics, or None when the
            CSV sidecar is absent.

        Raises:
            UsageError: If the file does not exist.
            SchemaError: If required columns are missing.
            DatasetParseError: If a value cannot be parsed.
        """
        text = self._read_text(path)
        if format == DataFormat.JSON:
            return self._load_results_json(text, path)

        header, rows = self._csv_rows(text, path)
        missing = [column for column in ("slug", "name", "final_index") if column not in header]
        if missing:
            raise SchemaError(f"{path}: missing required columns: {', '.join(missing)}")

        results = []
        for row_number, row in rows:
            column = "final_index"
            try:
                wri = self._optional_float(row.get("wri"))
                column = "pop_normalized"
                pop_normalized = self._optional_float(row.get("pop_normalized"))
                column = "final_index"
                final_index = float(row["final_index"])
                column = "flags"
                flags = tuple(ResultFlag(flag) for flag in (row.get("flags") or "").split(";") if flag)
                results.append(
                    IndexResult(
                        slug=row["slug"],
                        name=row["name"],
                        wri=wri,
                        pop_normalized=pop_normalized,
                        final_index=final_index,
                        flags=flags,
                    )
                )
            except ValueError as e:
                raise DatasetParseError(f"{path}: {e}", row=row_number, column=column) from e

        stats = None
        sidecar = stats_sidecar_path(path)
        if sidecar.exists():
            _, stats_rows = self._csv_rows(self._read_text(sidecar), sidecar)
            if stats_rows:
                try:
                    stats = SeriesStats.model_validate(
                        {k: v for k, v in stats_rows[0][1].items() if k in STATS_COLUMNS}
                    )
                except ValidationError as e:
                    raise DatasetParseError(f"{sidecar}: {_location(e)}", row=1) from e
        return results, stats

    def _load_results_json(
        self, text: str, path: Path
    ) -> tuple[list[IndexResult], Optional[SeriesStats]]:
        try:
            document = json.loads(text)
            rows = document["results"]
            results = [
                IndexResult.model_validate({k: v for k, v in row.items() if k != "rank"})
                for row in rows
            ]
            stats = SeriesStats.model_validate(document["stats"]) if document.get("stats") else None
        except json.JSONDecodeError as e:
            raise DatasetParseError(f"{path}: invalid JSON: {e.msg}", row=e.lineno) from e
        except (KeyError, TypeError, AttributeError) as e:
            raise SchemaError(f"{path}: not a results document ({e})") from e
        except ValidationError as e:
            raise DatasetParseError(f"{path}: {_location(e)}") from e
        return results, stats

    @staticmethod
    def _optional_float(cell: Optional[str]) -> Optional[float]:
        if cell is None or not cell.strip():
            return None
        return float(cell)

    # ------------------------------------------------------------------
    # Overrides
    # ------------------------------------------------------------------

    def load_indicator_set(self, path: Path) -> IndicatorSet:
        """
        Read an indicator-set override: a JSON list of IndicatorSpec objects
        (or an object with a ``specs`` list).
        """
        text = self._read_text(path)
        try:
            document = json.loads(text)
            specs = document["specs"] if isinstance(document, dict) else document
            return IndicatorSet(specs=TypeAdapter(tuple[IndicatorSpec, ...]).validate_python(specs))
        except json.JSONDecodeError as e:
            raise DatasetParseError(f"{path}: invalid JSON: {e.msg}", row=e.lineno) from e
        except (KeyError, TypeError) as e:
            raise SchemaError(f"{path}: not an indicator set ({e})") from e
        except ValidationError as e:
            raise SchemaError(f"{path}: {_location(e)}") from e

    def load_sources(self, path: Path) -> list[SourceDescriptor]:
        """Read a JSON list of SourceDescriptor objects."""
        text = self._read_text(path)
        try:
            return list(TypeAdapter(list[SourceDescriptor]).validate_json(text))
        except ValidationError as e:
            raise SchemaError(f"{path}: {_location(e)}") from e

    # ------------------------------------------------------------------
    # Distribution exports
    # ------------------------------------------------------------------

    def write_histogram(self, bins: Sequence[HistogramBin], path: Optional[Path]) -> None:
        rows = [[format_decimal(b.bin_low), format_decimal(b.bin_high), str(b.count)] for b in bins]
        self._write_text(self._csv_text(("bin_low", "bin_high", "count"), rows), path)

    def write_scatter(self, points: Sequence[ScatterPoint], path: Optional[Path]) -> None:
        rows = [[str(p.ordinal), format_decimal(p.value)] for p in points]
        self._write_text(self._csv_text(("ordinal", "value"), rows), path)

    def write_report(self, text: str, path: Optional[Path]) -> None:
        """Write a rendered report (tables) to a file, or stdout when ``path`` is None."""
        self._write_text(text if text.endswith("\n") else text + "\n", path)
