"""
Distribution emitters for index values.

Histogram bins and ordinal scatter points are produced as plain records so
external tools can plot the distribution of the final index.

Example:
    >>> ReportService.emit_histogram([0.1, 0.9], bins=2, value_range=(0.0, 1.0))
    [HistogramBin(bin_low=0.0, bin_high=0.5, count=1), HistogramBin(bin_low=0.5, bin_high=1.0, count=1)]
    >>> ReportService.emit_scatter([0.3, 0.2])[0]
    ScatterPoint(ordinal=1, value=0.3)
"""

from typing import Optional, Sequence

import numpy as np

from persistence.errors import EmptyInputError, UsageError
from persistence.models import HistogramBin, ScatterPoint


class ReportService:
    @staticmethod
    def emit_histogram(
        values: Sequence[float],
        bins: int,
        value_range: Optional[tuple[float, float]] = None,
    ) -> list[HistogramBin]:
        """
        Equal-width histogram whose counts always sum to ``len(values)``.

        Without ``value_range`` the bins span the data. The last bin is closed
        on both ends.

        Raises:
            EmptyInputError: If there are no values.
            UsageError: If ``bins`` < 1 or a value falls outside ``value_range``.
        """
        if len(values) == 0:
            raise EmptyInputError("cannot build a histogram of no values")
        if bins < 1:
            raise UsageError(f"bins must be at least 1, got {bins}")

        array = np.asarray(values, dtype=np.float64)
        if value_range is not None:
            low, high = value_range
            if array.min() < low or array.max() > high:
                raise UsageError(
                    f"values span [{array.min():g}, {array.max():g}], outside the range [{low:g}, {high:g}]"
                )

        counts, edges = np.histogram(array, bins=bins, range=value_range)
        return [
            HistogramBin(bin_low=float(edges[i]), bin_high=float(edges[i + 1]), count=int(counts[i]))
            for i in range(bins)
        ]

    @staticmethod
    def emit_scatter(values: Sequence[float]) -> list[ScatterPoint]:
        """Pair each value with a 1-based ordinal, keeping input order."""
        if len(values) == 0:
            raise EmptyInputError("cannot build a scatter of no values")
        return [
            ScatterPoint(ordinal=ordinal, value=float(value))
            for ordinal, value in enumerate(values, start=1)
        ]
