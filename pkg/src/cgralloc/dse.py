"""Scenario runner and design-space exploration over fabric sizes and policies.

A scenario maps every DFG of a workload once, replays the trace through the
chosen allocation policy, and reduces the recorded utilization to summary
statistics plus the projected lifetime of the worst-stressed cell.  Paired
runs compare the fixed-origin baseline against the rotating allocator on the
same workload and report the lifetime improvement, which equals the ratio of
the two worst-case utilizations.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from . import aging
from .allocation import AllocationPolicy, PivotScheduler, allocate, pivot_for_execution
from .mapper import DoesNotFitError, FabricDims, VirtualConfiguration, map_dfg
from .metrics import UtilizationMap, UtilizationSummary, record_execution, summarize
from .workload import Workload

DEFAULT_POLICY_PAIR = (AllocationPolicy.FIXED_ORIGIN, AllocationPolicy.ROTATING)


class EmptyScenarioError(Exception):
    """Every DFG of the workload was skipped; nothing to run."""


@dataclass(frozen=True)
class Preset:
    """Named fabric design point bundled with the tool.

    reported_avg_util carries the two published average-utilization figures
    for the design point (they disagree slightly for BP and BU); both are
    informational only and never feed any computation here.
    """

    name: str
    dims: FabricDims
    reported_avg_util: tuple[float, float]


PRESETS: dict[str, Preset] = {
    "BE": Preset("BE", FabricDims(num_cols=16, num_rows=2), (0.397, 0.397)),
    "BP": Preset("BP", FabricDims(num_cols=32, num_rows=4), (0.178, 0.171)),
    "BU": Preset("BU", FabricDims(num_cols=32, num_rows=8), (0.089, 0.085)),
}


@dataclass(frozen=True)
class Scenario:
    label: str
    dims: FabricDims
    policy: AllocationPolicy
    workload: Workload
    aging_params: aging.AgingParams


@dataclass(frozen=True)
class ScenarioResult:
    label: str
    num_cols: int
    num_rows: int
    total_executions: int
    avg_util: float
    max_util: float
    min_util: float
    argmax_cell: tuple[int, int]
    lifetime_years: float
    skipped_dfgs: tuple[tuple[int, str], ...] = ()
    baseline_max_util: float | None = None
    proposed_max_util: float | None = None
    lifetime_improvement: float | None = None
    error: str | None = None

    @classmethod
    def failed(cls, label: str, dims: FabricDims, error: str) -> "ScenarioResult":
        return cls(
            label=label,
            num_cols=dims.num_cols,
            num_rows=dims.num_rows,
            total_executions=0,
            avg_util=0.0,
            max_util=0.0,
            min_util=0.0,
            argmax_cell=(0, 0),
            lifetime_years=0.0,
            error=error,
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "num_cols": self.num_cols,
            "num_rows": self.num_rows,
            "total_executions": self.total_executions,
            "avg_util": self.avg_util,
            "max_util": self.max_util,
            "min_util": self.min_util,
            "argmax_cell": list(self.argmax_cell),
            "lifetime_years": self.lifetime_years,
            "skipped_dfgs": [[i, name] for i, name in self.skipped_dfgs],
            "baseline_max_util": self.baseline_max_util,
            "proposed_max_util": self.proposed_max_util,
            "lifetime_improvement": self.lifetime_improvement,
            "error": self.error,
        }


def map_workload(
    workload: Workload, dims: FabricDims
) -> tuple[dict[int, VirtualConfiguration], list[tuple[int, str]]]:
    """Map every DFG once; DFGs that do not fit are skipped, not split."""
    mapped: dict[int, VirtualConfiguration] = {}
    skipped: list[tuple[int, str]] = []
    for i, dfg in enumerate(workload.dfgs):
        try:
            mapped[i] = map_dfg(dfg, dims)
        except DoesNotFitError:
            skipped.append((i, dfg.name))
    return mapped, skipped


def replay_trace(
    workload: Workload,
    mapped: dict[int, VirtualConfiguration],
    dims: FabricDims,
    policy: AllocationPolicy,
) -> UtilizationMap:
    """Replay the trace with a fresh pivot scheduler, recording utilization.

    Trace entries whose DFG was skipped are dropped entirely; the global
    pivot counter advances once per executed configuration.
    """
    scheduler = PivotScheduler(dims)
    umap = UtilizationMap(dims)
    for dfg_index, repeats in workload.trace:
        vc = mapped.get(dfg_index)
        if vc is None:
            continue
        for _ in range(repeats):
            pivot = pivot_for_execution(policy, scheduler)
            record_execution(umap, allocate(vc, pivot, dims))
    return umap


def run_scenario_with_map(s: Scenario) -> tuple[ScenarioResult, UtilizationMap]:
    """run_scenario, but also hands back the raw utilization map."""
    mapped, skipped = map_workload(s.workload, s.dims)
    if not mapped:
        raise EmptyScenarioError(f"{s.label}: no DFG of the workload fits {s.dims}")
    umap = replay_trace(s.workload, mapped, s.dims, s.policy)
    if umap.total_executions == 0:
        raise EmptyScenarioError(f"{s.label}: trace only references skipped DFGs")
    summary = summarize(umap)
    result = ScenarioResult(
        label=s.label,
        num_cols=s.dims.num_cols,
        num_rows=s.dims.num_rows,
        total_executions=umap.total_executions,
        avg_util=summary.avg,
        max_util=summary.max,
        min_util=summary.min,
        argmax_cell=summary.argmax,
        lifetime_years=aging.lifetime(s.aging_params, summary.max),
        skipped_dfgs=tuple(skipped),
    )
    return result, umap


def run_scenario(s: Scenario) -> ScenarioResult:
    """Map, replay, summarize; deterministic for identical inputs."""
    result, _ = run_scenario_with_map(s)
    return result


def compare_policies(
    dims: FabricDims,
    workload: Workload,
    aging_params: aging.AgingParams,
    policies: tuple[AllocationPolicy, AllocationPolicy] = DEFAULT_POLICY_PAIR,
    label: str | None = None,
) -> ScenarioResult:
    """Run both policies on the same workload and pair the results.

    The unpaired stat fields describe the second (proposed) run; the first
    run contributes baseline_max_util.  Both runs use fresh schedulers and
    skip exactly the same DFGs, so average utilization matches between them.
    """
    label = label or f"L{dims.num_cols}W{dims.num_rows}"
    baseline_policy, proposed_policy = policies
    mapped, skipped = map_workload(workload, dims)
    if not mapped:
        raise EmptyScenarioError(f"{label}: no DFG of the workload fits {dims}")

    summaries: list[UtilizationSummary] = []
    executions = 0
    for policy in (baseline_policy, proposed_policy):
        umap = replay_trace(workload, mapped, dims, policy)
        if umap.total_executions == 0:
            raise EmptyScenarioError(f"{label}: trace only references skipped DFGs")
        executions = umap.total_executions
        summaries.append(summarize(umap))
    base, prop = summaries

    return ScenarioResult(
        label=label,
        num_cols=dims.num_cols,
        num_rows=dims.num_rows,
        total_executions=executions,
        avg_util=prop.avg,
        max_util=prop.max,
        min_util=prop.min,
        argmax_cell=prop.argmax,
        lifetime_years=aging.lifetime(aging_params, prop.max),
        skipped_dfgs=tuple(skipped),
        baseline_max_util=base.max,
        proposed_max_util=prop.max,
        lifetime_improvement=aging.lifetime_improvement(base.max, prop.max),
    )


def _sweep_point(args: tuple) -> ScenarioResult:
    dims, workload, aging_params, policies = args
    label = f"L{dims.num_cols}W{dims.num_rows}"
    try:
        return compare_policies(dims, workload, aging_params, policies)
    except EmptyScenarioError as e:
        return ScenarioResult.failed(label, dims, str(e))


def sweep(
    col_values: list[int],
    row_values: list[int],
    workload: Workload,
    aging_params: aging.AgingParams,
    policies: tuple[AllocationPolicy, AllocationPolicy] = DEFAULT_POLICY_PAIR,
    jobs: int = 1,
) -> list[ScenarioResult]:
    """Paired comparison at every (cols, rows) point, ordered by (cols, rows).

    Scenario failures (nothing fits) become failed entries; the sweep keeps
    going.  Points are independent, so jobs > 1 fans them out to worker
    processes without changing the results or their order.
    """
    if not col_values or not row_values:
        raise ValueError("need at least one column count and one row count")
    points = [
        (FabricDims(num_cols=c, num_rows=r), workload, aging_params, policies)
        for c, r in sorted(product(col_values, row_values))
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, points))
    return [_sweep_point(p) for p in points]


def results_table(results: list[ScenarioResult]) -> str:
    """Aligned text table over the paired-result columns."""
    headers = ["scenario", "avg_util", "baseline_worst", "proposed_worst", "lifetime_improv"]
    rows = [headers]
    for res in results:
        if res.error is not None:
            rows.append([res.label, "ERROR", res.error, "", ""])
            continue
        rows.append([
            res.label,
            f"{res.avg_util:.4f}",
            "" if res.baseline_max_util is None else f"{res.baseline_max_util:.4f}",
            "" if res.proposed_max_util is None else f"{res.proposed_max_util:.4f}",
            "" if res.lifetime_improvement is None else f"{res.lifetime_improvement:.2f}x",
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"
