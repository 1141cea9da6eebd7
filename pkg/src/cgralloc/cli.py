"""Command-line front end: gen, map, simulate, dse, age.

Exit codes: 0 success, 2 invalid arguments, 3 input/output failure,
4 mapping infeasibility.  All randomness flows from --seed.

`map --dump` placement grammar: one header line `dfg <index> <name>` per
DFG followed by one `(op, row, col_start, width)` tuple line per op.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import aging, dse, metrics
from .allocation import AllocationPolicy, ORIGIN, Pivot
from .fabric import plan_table, reconfig_plan
from .mapper import DoesNotFitError, FabricDims, map_dfg
from .workload import (
    GeneratorParams,
    WorkloadError,
    generate_random_workload,
    parse_workload,
    serialize_workload,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NO_FIT = 4


def _add_dims_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-L", "--cols", type=int, default=None, help="fabric columns")
    p.add_argument("-W", "--rows", type=int, default=None, help="fabric rows")
    p.add_argument("--lines", type=int, default=4, help="configuration lines (default 4)")
    p.add_argument("--context", type=int, default=None,
                   help="context lines (default 2*rows)")
    p.add_argument("--preset", choices=sorted(dse.PRESETS),
                   help="named design point (mutually exclusive with -L/-W)")


def _resolve_dims(args: argparse.Namespace, parser: argparse.ArgumentParser) -> FabricDims:
    if args.preset is not None:
        if args.cols is not None or args.rows is not None:
            parser.error("--preset and explicit -L/-W are mutually exclusive")
        base = dse.PRESETS[args.preset].dims
        cols, rows = base.num_cols, base.num_rows
    else:
        if args.cols is None or args.rows is None:
            parser.error("need either --preset or both -L and -W")
        cols, rows = args.cols, args.rows
    try:
        return FabricDims(num_cols=cols, num_rows=rows,
                          num_config_lines=args.lines,
                          num_context_lines=args.context)
    except ValueError as e:
        parser.error(str(e))


def _add_aging_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--temperature", type=float, default=350.0, help="kelvin")
    p.add_argument("--vdd", type=float, default=1.0, help="volts")
    p.add_argument("--threshold", type=float, default=0.10,
                   help="delay-degradation threshold fraction")
    p.add_argument("--ref-lifetime", type=float, default=3.0,
                   help="years to threshold at the reference utilization")


def _resolve_aging(args: argparse.Namespace, parser: argparse.ArgumentParser) -> aging.AgingParams:
    try:
        return aging.AgingParams(
            temperature_k=args.temperature,
            vdd=args.vdd,
            delay_threshold=args.threshold,
            reference_lifetime_years=args.ref_lifetime,
        )
    except ValueError as e:
        parser.error(str(e))


def _read_workload(path: str):
    with open(path, encoding="utf-8") as f:
        return parse_workload(f.read())


def cmd_gen(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        params = GeneratorParams(
            num_dfgs=args.dfgs,
            ops_per_dfg=(args.ops_min, args.ops_max),
            memory_op_fraction=args.mem_frac,
            num_inputs=args.inputs,
            trace_length=args.trace_len,
            max_repeat=args.max_repeat,
        )
        workload = generate_random_workload(params, args.seed)
    except ValueError as e:
        parser.error(str(e))
    with open(args.output, "w", encoding="utf-8") as f:
        f.write(serialize_workload(workload))
    return EXIT_OK


def cmd_map(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    dims = _resolve_dims(args, parser)
    workload = _read_workload(args.workload)
    misfits = []
    for i, dfg in enumerate(workload.dfgs):
        try:
            vc = map_dfg(dfg, dims)
        except DoesNotFitError as e:
            misfits.append((i, dfg.name, e))
            continue
        if args.dump:
            print(f"dfg {i} {dfg.name}")
            for p in vc.placements:
                print(f"({p.op_id}, {p.row}, {p.col_start}, {p.width})")
    if misfits:
        for i, name, e in misfits:
            print(f"dfg {i} {name}: {e}", file=sys.stderr)
        return EXIT_NO_FIT
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    dims = _resolve_dims(args, parser)
    aging_params = _resolve_aging(args, parser)
    workload = _read_workload(args.workload)
    scenario = dse.Scenario(
        label=f"L{dims.num_cols}W{dims.num_rows}",
        dims=dims,
        policy=AllocationPolicy(args.policy),
        workload=workload,
        aging_params=aging_params,
    )
    try:
        result, umap = dse.run_scenario_with_map(scenario)
    except dse.EmptyScenarioError as e:
        print(str(e), file=sys.stderr)
        return EXIT_NO_FIT
    if args.heatmap:
        with open(args.heatmap, "w", encoding="utf-8") as f:
            f.write(metrics.export_heatmap(umap))
    if args.summary:
        summary = metrics.summarize(umap)
        doc = {
            "label": result.label,
            "num_cols": dims.num_cols,
            "num_rows": dims.num_rows,
            "policy": args.policy,
            "total_executions": result.total_executions,
            "skipped_dfgs": [[i, name] for i, name in result.skipped_dfgs],
            "lifetime_years": result.lifetime_years,
            **summary.to_dict(),
        }
        with open(args.summary, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
    if args.dump_plan:
        # plan of the run's final execution: fixed policy always loads at the
        # origin; rotating ends wherever the trace left the scheduler
        if scenario.policy is AllocationPolicy.ROTATING and result.total_executions > 0:
            k = result.total_executions - 1
            pivot = Pivot(row=(k // dims.num_cols) % dims.num_rows,
                          col=k % dims.num_cols)
        else:
            pivot = ORIGIN
        print(f"pivot=({pivot.row}, {pivot.col})")
        print(plan_table(reconfig_plan(pivot, dims)), end="")
    print(
        f"{result.label} policy={args.policy} executions={result.total_executions} "
        f"avg={result.avg_util:.6f} max={result.max_util:.6f} min={result.min_util:.6f} "
        f"lifetime={result.lifetime_years:.2f}y"
    )
    return EXIT_OK


def cmd_dse(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.preset is not None:
        if args.cols or args.rows:
            parser.error("--preset and explicit -L/-W are mutually exclusive")
        base = dse.PRESETS[args.preset].dims
        col_values, row_values = [base.num_cols], [base.num_rows]
    else:
        if not args.cols or not args.rows:
            parser.error("need either --preset or both -L and -W value lists")
        col_values, row_values = args.cols, args.rows
    aging_params = _resolve_aging(args, parser)
    workload = _read_workload(args.workload)
    results = dse.sweep(col_values, row_values, workload, aging_params, jobs=args.jobs)
    print(dse.results_table(results), end="")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            json.dump([r.to_dict() for r in results], f, indent=2)
            f.write("\n")
    return EXIT_OK


def cmd_age(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    aging_params = _resolve_aging(args, parser)
    u = args.u
    if u is None and args.summary is not None:
        with open(args.summary, encoding="utf-8") as f:
            u = json.load(f)["max"]
    if u is None:
        parser.error("need --u or --summary")
    try:
        life = aging.lifetime(aging_params, u)
        print(f"lifetime(u={u:g}) = {life:.2f} years")
        if args.u2 is not None:
            life2 = aging.lifetime(aging_params, args.u2)
            improvement = aging.lifetime_improvement(u, args.u2)
            print(f"lifetime(u={args.u2:g}) = {life2:.2f} years")
            print(f"improvement = {improvement:.2f}x")
        if args.curve:
            points = aging.delay_curve(aging_params, u, args.horizon, args.points)
            with open(args.curve, "w", encoding="utf-8") as f:
                f.write(aging.delay_curve_csv(points))
    except ValueError as e:
        parser.error(str(e))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgralloc",
        description="Utilization-balancing configuration allocation simulator "
                    "for rectangular CGRA fabrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random workload file")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--dfgs", type=int, default=20)
    p_gen.add_argument("--ops-min", type=int, default=3)
    p_gen.add_argument("--ops-max", type=int, default=10)
    p_gen.add_argument("--mem-frac", type=float, default=0.15)
    p_gen.add_argument("--inputs", type=int, default=4)
    p_gen.add_argument("--trace-len", type=int, default=100)
    p_gen.add_argument("--max-repeat", type=int, default=8)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_map = sub.add_parser("map", help="place every DFG of a workload")
    p_map.add_argument("workload")
    _add_dims_args(p_map)
    p_map.add_argument("--dump", action="store_true", help="print placements")
    p_map.set_defaults(func=cmd_map)

    p_sim = sub.add_parser("simulate", help="replay a trace and record utilization")
    p_sim.add_argument("workload")
    _add_dims_args(p_sim)
    _add_aging_args(p_sim)
    p_sim.add_argument("--policy", choices=[p.value for p in AllocationPolicy],
                       default="fixed")
    p_sim.add_argument("--heatmap", help="write per-cell utilization CSV here")
    p_sim.add_argument("--summary", help="write summary JSON here")
    p_sim.add_argument("--dump-plan", action="store_true",
                       help="print the reconfiguration plan of the final execution")
    p_sim.set_defaults(func=cmd_simulate)

    p_dse = sub.add_parser("dse", help="paired policy comparison over fabric sizes")
    p_dse.add_argument("workload")
    p_dse.add_argument("-L", "--cols", type=int, nargs="+", default=None)
    p_dse.add_argument("-W", "--rows", type=int, nargs="+", default=None)
    p_dse.add_argument("--preset", choices=sorted(dse.PRESETS))
    _add_aging_args(p_dse)
    p_dse.add_argument("--jobs", type=int, default=1)
    p_dse.add_argument("-o", "--output", help="write results JSON here")
    p_dse.set_defaults(func=cmd_dse)

    p_age = sub.add_parser("age", help="lifetime and delay-curve queries")
    p_age.add_argument("--u", type=float, default=None, help="utilization in [0,1]")
    p_age.add_argument("--u2", type=float, default=None,
                       help="second utilization; prints the improvement ratio")
    p_age.add_argument("--summary", help="take u from a simulate summary JSON")
    _add_aging_args(p_age)
    p_age.add_argument("--curve", help="write a delay-curve CSV here")
    p_age.add_argument("--horizon", type=float, default=10.0, help="curve span in years")
    p_age.add_argument("--points", type=int, default=101)
    p_age.set_defaults(func=cmd_age)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, parser)
    except SystemExit as e:  # parser.error inside a command
        return int(e.code or 0)
    except WorkloadError as e:
        print(f"bad workload file: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(str(e), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
