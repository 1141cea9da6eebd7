"""Per-cell utilization accounting across configuration executions.

Utilization of a cell is the fraction of executions in which the cell was
occupied, irrespective of how long each configuration runs.  An optional
duration-weighted mode weights every execution by its latency instead; it is
not the default.
"""

from __future__ import annotations

from dataclasses import dataclass

from .allocation import PhysicalAllocation
from .mapper import FabricDims

DEFAULT_HISTOGRAM_BINS = 20


class EmptyMapError(ValueError):
    """Rates requested from a map that recorded no executions."""


class UtilizationMap:
    """Mutable per-cell activity counters; one instance per scenario run."""

    def __init__(self, dims: FabricDims, duration_weighted: bool = False):
        self.dims = dims
        self.duration_weighted = duration_weighted
        self.active_count: list[list[float]] = [
            [0] * dims.num_cols for _ in range(dims.num_rows)
        ]
        self.total_executions = 0
        self.total_weight: float = 0


def record_execution(m: UtilizationMap, alloc: PhysicalAllocation) -> None:
    """Count one execution: every occupied physical cell is bumped once.

    In duration-weighted mode the bump is the execution's latency in cycles
    rather than 1, and rates become time-occupied over time-total.
    """
    if alloc.dims != m.dims:
        raise ValueError(f"allocation dims {alloc.dims} do not match map dims {m.dims}")
    weight = alloc.vc.num_cols_used * 0.5 if m.duration_weighted else 1
    counts = m.active_count
    for row, col in alloc.occupied_cells():
        counts[row][col] += weight
    m.total_executions += 1
    m.total_weight += weight


def utilization_rates(m: UtilizationMap) -> list[list[float]]:
    """Per-cell occupancy fraction over everything recorded so far."""
    if m.total_executions == 0:
        raise EmptyMapError("no executions recorded")
    total = m.total_weight
    return [[count / total for count in row] for row in m.active_count]


@dataclass(frozen=True)
class UtilizationSummary:
    avg: float
    max: float
    min: float
    argmax: tuple[int, int]
    histogram: tuple[int, ...]
    num_bins: int

    def to_dict(self) -> dict:
        return {
            "avg": self.avg,
            "max": self.max,
            "min": self.min,
            "argmax": list(self.argmax),
            "histogram": list(self.histogram),
            "num_bins": self.num_bins,
        }


def summarize(m: UtilizationMap, num_bins: int = DEFAULT_HISTOGRAM_BINS) -> UtilizationSummary:
    """Aggregate rates: average, extremes, argmax, fixed-width histogram.

    Argmax ties break by (row, col) lexicographic order.  Histogram bins are
    uniform over [0, 1]; the last bin is closed so a rate of 1.0 lands in it.
    """
    if num_bins < 1:
        raise ValueError("num_bins must be >= 1")
    rates = utilization_rates(m)
    flat = [(rate, r, c) for r, row in enumerate(rates) for c, rate in enumerate(row)]
    avg = sum(rate for rate, _, _ in flat) / len(flat)
    best_rate, best_r, best_c = flat[0]
    worst = flat[0][0]
    hist = [0] * num_bins
    for rate, r, c in flat:
        if rate > best_rate:
            best_rate, best_r, best_c = rate, r, c
        if rate < worst:
            worst = rate
        hist[min(int(rate * num_bins), num_bins - 1)] += 1
    return UtilizationSummary(
        avg=avg,
        max=best_rate,
        min=worst,
        argmax=(best_r, best_c),
        histogram=tuple(hist),
        num_bins=num_bins,
    )


def export_heatmap(m: UtilizationMap) -> str:
    """CSV heatmap: header, then one line of 6-decimal fractions per row."""
    return format_heatmap(utilization_rates(m), m.dims, m.total_executions)


def format_heatmap(rates: list[list[float]], dims: FabricDims, executions: int) -> str:
    lines = [f"#rows={dims.num_rows},cols={dims.num_cols},executions={executions}"]
    lines.extend(",".join(f"{rate:.6f}" for rate in row) for row in rates)
    return "\n".join(lines) + "\n"


def parse_heatmap(text: str) -> tuple[list[list[float]], FabricDims, int]:
    """Inverse of format_heatmap (rates come back rounded to 6 decimals)."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing heatmap header")
    fields = dict(part.split("=") for part in lines[0][1:].split(","))
    num_rows, num_cols = int(fields["rows"]), int(fields["cols"])
    executions = int(fields["executions"])
    rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    if len(rows) != num_rows or any(len(row) != num_cols for row in rows):
        raise ValueError("heatmap body does not match header dimensions")
    return rows, FabricDims(num_cols=num_cols, num_rows=num_rows), executions
