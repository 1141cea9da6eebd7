"""Functional fabric model: datapath execution and reconfiguration plans.

Execution fidelity is functional-with-column-ordering: values flow left to
right, ops read their operands at their starting column and publish results
at their completion boundary.  Crossbar wiring, context-register timing and
electrical behaviour are below this model's abstraction level.

The reconfiguration plan captures how a pivoted configuration is loaded:
which configuration line each physical column listens to, the vertical
barrel-shift applied to its bits, and where the wrap-around feedback mux is
engaged.  Loading always takes ceil(num_cols / num_config_lines) cycles, so
moving a configuration costs no extra reconfiguration time.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .allocation import PhysicalAllocation, Pivot
from .mapper import FabricDims, VirtualConfiguration
from .workload import WORD_MASK, Opcode, RefKind, ValueRef


@dataclass(frozen=True)
class ReconfigPlan:
    """Per-physical-column wiring to realize a pivoted load.

    With pivot (0, 0) this degenerates to the baseline wiring: column i
    listens to line i mod n, no vertical shift, no wrap feedback.
    """

    line_select: tuple[int, ...]
    barrel_shift_rows: tuple[int, ...]
    wrap_feedback_enabled: tuple[bool, ...]
    reconfig_cycles: int


def reconfig_plan(pivot: Pivot, dims: FabricDims) -> ReconfigPlan:
    """Wiring for loading a configuration shifted by `pivot`.

    Physical column pc hosts logical column (pc - pivot.col) mod num_cols, so
    it selects that column's configuration line; every column shifts its bits
    down by pivot.row; the column hosting logical column 0 takes the initial
    input context through the feedback mux whenever the start column moved.
    """
    num_cols, num_rows, n = dims.num_cols, dims.num_rows, dims.num_config_lines
    if not (0 <= pivot.row < num_rows and 0 <= pivot.col < num_cols):
        raise ValueError(f"pivot {pivot} outside {num_cols}x{num_rows} fabric")
    line_select = tuple(((pc - pivot.col) % num_cols) % n for pc in range(num_cols))
    shifts = tuple(pivot.row for _ in range(num_cols))
    wrap = tuple(pc == pivot.col and pivot.col != 0 for pc in range(num_cols))
    cycles = -(-num_cols // n)
    return ReconfigPlan(
        line_select=line_select,
        barrel_shift_rows=shifts,
        wrap_feedback_enabled=wrap,
        reconfig_cycles=cycles,
    )


def plan_table(plan: ReconfigPlan) -> str:
    """Render a plan as an aligned text table, one row per physical column."""
    lines = [f"reconfig_cycles={plan.reconfig_cycles}",
             "column  line_select  shift  wrap"]
    for pc, (sel, shift, wrap) in enumerate(
        zip(plan.line_select, plan.barrel_shift_rows, plan.wrap_feedback_enabled)
    ):
        lines.append(f"{pc:<6}  {sel:<11}  {shift:<5}  {'yes' if wrap else 'no'}")
    return "\n".join(lines) + "\n"


class MemoryModel:
    """Sparse 32-bit word store standing in for the data cache.

    Reads of unwritten addresses return 0, so an explicit zero write is
    indistinguishable from no write; equality compares nonzero content only.
    """

    def __init__(self, initial: dict[int, int] | None = None):
        self._words: dict[int, int] = {}
        if initial:
            for addr, word in initial.items():
                self.write(addr, word)

    def read(self, addr: int) -> int:
        return self._words.get(addr & WORD_MASK, 0)

    def write(self, addr: int, word: int) -> None:
        addr &= WORD_MASK
        word &= WORD_MASK
        if word == 0:
            self._words.pop(addr, None)
        else:
            self._words[addr] = word

    def copy(self) -> "MemoryModel":
        clone = MemoryModel()
        clone._words = dict(self._words)
        return clone

    def as_dict(self) -> dict[int, int]:
        return dict(self._words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MemoryModel):
            return NotImplemented
        return self._words == other._words

    def __repr__(self) -> str:
        return f"MemoryModel({self._words!r})"


@dataclass(frozen=True)
class ExecResult:
    outputs: tuple[int, ...]
    memory: MemoryModel
    columns_used: int
    latency_cycles: float  # one column = half a processor cycle


def _signed(v: int) -> int:
    return v - 0x100000000 if v & 0x80000000 else v


def _alu(opcode: Opcode, a: int, b: int) -> int:
    if opcode is Opcode.ADD:
        return (a + b) & WORD_MASK
    if opcode is Opcode.SUB:
        return (a - b) & WORD_MASK
    if opcode is Opcode.AND:
        return a & b
    if opcode is Opcode.OR:
        return a | b
    if opcode is Opcode.XOR:
        return a ^ b
    if opcode is Opcode.SHL:
        return (a << (b & 31)) & WORD_MASK
    if opcode is Opcode.SHR:
        return a >> (b & 31)
    if opcode is Opcode.CMPLT:
        return int(_signed(a) < _signed(b))
    raise ValueError(f"not an ALU opcode: {opcode}")


def execute(
    vc: VirtualConfiguration,
    pivot: Pivot,
    inputs: list[int],
    mem: MemoryModel,
    dims: FabricDims,
) -> ExecResult:
    """Run one configuration; mutates and returns `mem` as the final state.

    Ops are evaluated in ascending column order, with the column of each op
    recovered from its physical cell under the pivot (the round trip through
    the physical mapping is the identity, which is exactly why moving a
    configuration preserves its semantics).  A store's write becomes visible
    at its completion boundary: a load sees it iff the store completes at or
    before the load's starting column.
    """
    dfg = vc.dfg
    if len(inputs) != dfg.num_inputs:
        raise ValueError(f"expected {dfg.num_inputs} inputs, got {len(inputs)}")
    num_rows, num_cols = dims.num_rows, dims.num_cols
    if not (0 <= pivot.row < num_rows and 0 <= pivot.col < num_cols):
        raise ValueError(f"pivot {pivot} outside {num_cols}x{num_rows} fabric")

    words = [v & WORD_MASK for v in inputs]
    values: dict[int, int] = {}

    def resolve(ref: ValueRef) -> int:
        if ref.kind is RefKind.INPUT:
            return words[ref.index]
        return values[ref.index]

    def start_col(op_id: int) -> int:
        physical = (vc.placement(op_id).col_start + pivot.col) % num_cols
        return (physical - pivot.col) % num_cols

    order = sorted(range(len(dfg.ops)), key=lambda i: (start_col(i), i))
    pending: list[tuple[int, int, int, int]] = []  # (boundary, seq, addr, word)
    seq = 0
    for op_id in order:
        op = dfg.ops[op_id]
        start = start_col(op_id)
        while pending and pending[0][0] <= start:
            _, _, addr, word = heapq.heappop(pending)
            mem.write(addr, word)
        if op.opcode is Opcode.LOAD:
            values[op_id] = mem.read(resolve(op.sources[0]))
        elif op.opcode is Opcode.STORE:
            boundary = vc.placement(op_id).col_end
            heapq.heappush(pending, (boundary, seq, resolve(op.sources[0]), resolve(op.sources[1])))
            seq += 1
        else:
            values[op_id] = _alu(op.opcode, resolve(op.sources[0]), resolve(op.sources[1]))
    while pending:
        _, _, addr, word = heapq.heappop(pending)
        mem.write(addr, word)

    outputs = tuple(resolve(ref) for ref in dfg.outputs)
    return ExecResult(
        outputs=outputs,
        memory=mem,
        columns_used=vc.num_cols_used,
        latency_cycles=vc.num_cols_used * 0.5,
    )


def check_physical_legality(
    alloc: PhysicalAllocation, plan: ReconfigPlan, dims: FabricDims
) -> list[str]:
    """Verify an allocation is realizable under a plan (empty list = ok).

    Checks that the cell map is a bijection, that every placed cell's column
    bits are reachable (the plan's line select and barrel shift reproduce the
    logical column contents at the physical location), and that the wrap
    feedback mux is engaged exactly at the start column when the pivot moved
    it, so any dependency crossing the physical right edge has a path.
    """
    violations: list[str] = []
    num_rows, num_cols, n = dims.num_rows, dims.num_cols, dims.num_config_lines
    vc = alloc.vc
    pivot = alloc.pivot

    logical_cells: set[tuple[int, int]] = set()
    physical_cells: list[tuple[int, int]] = []
    for p in vc.placements:
        cells = alloc.cell_map.get(p.op_id)
        if cells is None or len(cells) != p.width:
            violations.append(f"op {p.op_id}: cell map does not cover its {p.width} column(s)")
            continue
        for k, (pr, pc) in enumerate(cells):
            lc = p.col_start + k
            logical_cells.add((p.row, lc))
            physical_cells.append((pr, pc))
            if not (0 <= pr < num_rows and 0 <= pc < num_cols):
                violations.append(f"op {p.op_id}: physical cell ({pr}, {pc}) out of bounds")
                continue
            if plan.line_select[pc] != lc % n:
                violations.append(
                    f"column {pc}: line select {plan.line_select[pc]}, "
                    f"op {p.op_id} needs {lc % n}"
                )
            if plan.barrel_shift_rows[pc] != (pr - p.row) % num_rows:
                violations.append(
                    f"column {pc}: barrel shift {plan.barrel_shift_rows[pc]}, "
                    f"op {p.op_id} needs {(pr - p.row) % num_rows}"
                )

    if len(set(physical_cells)) != len(physical_cells):
        violations.append("physical cells overlap (cell map not injective)")
    elif len(set(physical_cells)) != len(logical_cells):
        violations.append("physical cell count does not match logical occupancy")

    expected_wrap = {pivot.col} if pivot.col != 0 else set()
    actual_wrap = {pc for pc, on in enumerate(plan.wrap_feedback_enabled) if on}
    if actual_wrap != expected_wrap:
        violations.append(
            f"wrap feedback at columns {sorted(actual_wrap)}, expected {sorted(expected_wrap)}"
        )
    if _crosses_right_edge(vc, pivot, num_cols) and pivot.col not in actual_wrap:
        violations.append("a dependency crosses the physical right edge but wrap feedback is off")
    return violations


def _crosses_right_edge(vc: VirtualConfiguration, pivot: Pivot, num_cols: int) -> bool:
    """True when some producer->consumer value physically wraps past the edge.

    A value alive across logical boundary b wraps iff boundary b sits at the
    physical seam, i.e. (b + pivot.col) mod num_cols == 0 for 0 < b.
    """
    if pivot.col == 0:
        return False
    for op in vc.dfg.ops:
        consumer_start = vc.placement(op.id).col_start
        for ref in op.sources:
            if ref.kind is not RefKind.OP:
                continue
            producer_end = vc.placement(ref.index).col_end
            for b in range(producer_end, consumer_start + 1):
                if b > 0 and (b + pivot.col) % num_cols == 0:
                    return True
    return False
