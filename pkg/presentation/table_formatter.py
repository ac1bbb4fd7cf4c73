"""
Table Formatter Module for the Web Reputation Index system.

This module renders rankings, statistics, histograms and validation warnings
as console tables. Tables are built with ``prettytable``; a shared
``format_table_generic`` applies per-column formatters the same way for every
table, so each specialized formatter only chooses headers and converters.

Values print with six decimal places. With ``decimal_comma`` they use a comma
instead of a dot, the way Turkish-language tables print them ("0,449508");
machine-readable files always use dots.

Example:
    >>> print(format_ranking_table(top_ten, "Ten most reputable universities"))
    +------+-------------+----------+
    | Rank | University  |  Index   |
    +------+-------------+----------+
    |  1   | Anadolu     | 0.449508 |
    ...

Functions:
    format_value: Six-decimal rendering with optional decimal comma.
    format_table_generic: Generic table builder with column-specific formatters.
    format_ranking_table: Rank / short name / index table.
    format_stats_table: Count, mean, extrema and standard deviation.
    format_stats_line: One-line statistics summary for the error stream.
    format_histogram_table: Histogram bins and counts.
    format_warnings_table: Snapshot validation warnings.
"""

from functools import partial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from prettytable import PrettyTable

from persistence.models import HistogramBin, Ranking, SeriesStats, ValidationWarning
from persistence.naming import short_name


def format_value(value: float, decimal_comma: bool = False) -> str:
    text = f"{value:.6f}"
    return text.replace(".", ",") if decimal_comma else text


def format_table_generic(
    data: List[Tuple[Any, ...]],
    headers: List[str],
    title: str,
    column_formatters: Optional[Dict[int, Callable[[Any], str]]] = None,
    align: Optional[Dict[str, str]] = None,
) -> str:
    """
    Format rows into a titled table.

    Args:
        data (List[Tuple]): Rows; each tuple has one element per header.
        headers (List[str]): Column headers.
        title (str): Title printed above the table.
        column_formatters (Optional[Dict[int, Callable]]): Converters keyed by
            0-based column index. Other columns use ``str``.
        align (Optional[Dict[str, str]]): prettytable alignment ("l", "c", "r")
            keyed by header.

    Returns:
        str: The rendered table, or a short notice when ``data`` is empty.

    Raises:
        ValueError: If a row does not have one cell per header.
    """
    if not data:
        return f"{title}\n{'=' * len(title)}\nNo data to display."

    table = PrettyTable(headers)
    table.title = title
    formatters = column_formatters or {}
    for row in data:
        if len(row) != len(headers):
            raise ValueError(f"row has {len(row)} cells, expected {len(headers)}")
        table.add_row([formatters.get(i, str)(cell) for i, cell in enumerate(row)])
    for header, side in (align or {}).items():
        table.align[header] = side
    return table.get_string()


def format_ranking_table(ranking: Ranking, title: str, decimal_comma: bool = False) -> str:
    """Render a ranking with short university names."""
    rows = [(entry.rank, short_name(entry.name), entry.value) for entry in ranking.entries]
    return format_table_generic(
        rows,
        ["Rank", "University", "Index"],
        title,
        column_formatters={2: lambda value: format_value(value, decimal_comma)},
        align={"University": "l", "Index": "r"},
    )


def format_stats_table(stats: SeriesStats, decimal_comma: bool = False) -> str:
    """Render descriptive statistics of the index values."""
    rows = [
        ("Count", str(stats.count)),
        ("Mean (μ)", format_value(stats.mean, decimal_comma)),
        ("Maximum", format_value(stats.max, decimal_comma)),
        ("Minimum", format_value(stats.min, decimal_comma)),
        (f"Standard Deviation (σ, {stats.convention.value})", format_value(stats.std, decimal_comma)),
    ]
    return format_table_generic(
        rows, ["Property", "Value"], "Properties of the index values", align={"Property": "l", "Value": "r"}
    )


def format_stats_line(stats: SeriesStats) -> str:
    return (
        f"mean={stats.mean:.6f} max={stats.max:.6f} min={stats.min:.6f} "
        f"std={stats.std:.6f} count={stats.count} convention={stats.convention.value}"
    )


def format_histogram_table(bins: Sequence[HistogramBin], decimal_comma: bool = False) -> str:
    rows = [(b.bin_low, b.bin_high, b.count) for b in bins]
    as_value = partial(format_value, decimal_comma=decimal_comma)
    return format_table_generic(
        rows,
        ["From", "To", "Count"],
        "Distribution of the index values",
        column_formatters={0: as_value, 1: as_value},
        align={"Count": "r"},
    )


def format_warnings_table(warnings: Sequence[ValidationWarning]) -> str:
    rows = [(w.slug, w.indicator_id, w.code, w.message) for w in warnings]
    return format_table_generic(
        rows,
        ["Entity", "Indicator", "Code", "Message"],
        "Snapshot validation warnings",
        align={"Entity": "l", "Indicator": "l", "Message": "l"},
    )
