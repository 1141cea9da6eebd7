"""Greedy first-fit placement of DFGs onto a rectangular FU fabric.

The fabric is a grid of functional units: data flows strictly left to right,
each op occupies one row and a run of columns set by its latency (one column
for ALU ops, four for memory ops).  The mapper reproduces the corner bias of
conventional greedy allocation: ops go to the first free spot scanning
columns outward and rows top-down, so cell (0, 0) is always used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .workload import Dfg, Opcode, RefKind, topological_order

ALU_WIDTH = 1
MEMORY_WIDTH = 4


@dataclass(frozen=True)
class FabricDims:
    """Fabric geometry: num_cols x num_rows FU cells.

    num_config_lines is the number of reconfiguration buses feeding the
    columns; num_context_lines bounds how many live values can cross a
    column boundary (defaults to twice the row count, exposed as a knob
    because the real figure is not pinned down anywhere).
    """

    num_cols: int
    num_rows: int
    num_config_lines: int = 4
    num_context_lines: int | None = None

    def __post_init__(self) -> None:
        if self.num_cols < 1 or self.num_rows < 1:
            raise ValueError("fabric needs at least one row and one column")
        if self.num_config_lines < 1:
            raise ValueError("num_config_lines must be >= 1")
        if self.num_context_lines is None:
            object.__setattr__(self, "num_context_lines", 2 * self.num_rows)
        elif self.num_context_lines < 1:
            raise ValueError("num_context_lines must be >= 1")

    @property
    def num_cells(self) -> int:
        return self.num_cols * self.num_rows


def op_width(opcode: Opcode) -> int:
    """Columns a kind of op occupies: 1 for ALU ops, 4 for loads/stores."""
    return MEMORY_WIDTH if opcode.is_memory else ALU_WIDTH


@dataclass(frozen=True)
class Placement:
    op_id: int
    row: int
    col_start: int
    width: int

    @property
    def col_end(self) -> int:
        """First column boundary after the op; its result is available here."""
        return self.col_start + self.width


@dataclass(frozen=True)
class VirtualConfiguration:
    """A mapped DFG in logical fabric coordinates, before physical binding."""

    dfg: Dfg
    placements: tuple[Placement, ...]  # indexed by op id
    num_cols_used: int
    num_rows_used: int

    def placement(self, op_id: int) -> Placement:
        return self.placements[op_id]

    @cached_property
    def occupied_cells(self) -> frozenset[tuple[int, int]]:
        cells = set()
        for p in self.placements:
            for c in range(p.col_start, p.col_end):
                cells.add((p.row, c))
        return frozenset(cells)


class DoesNotFitError(Exception):
    """Some op cannot be placed within the fabric."""

    def __init__(self, op_id: int, frontier_col: int, dims: FabricDims):
        super().__init__(
            f"op {op_id} does not fit: no free slot from frontier column "
            f"{frontier_col} on a {dims.num_cols}x{dims.num_rows} fabric"
        )
        self.op_id = op_id
        self.frontier_col = frontier_col


def map_dfg(d: Dfg, dims: FabricDims) -> VirtualConfiguration:
    """First-fit greedy placement.

    Ops are visited in topological order.  Each op's earliest legal column is
    the maximum completion boundary of its producers (0 if none).  From there
    columns are scanned outward and, within a column, rows top-down; the op
    takes the first spot where its full width is free, fits inside the fabric,
    and respects the memory-port rule (at most one load and one store may
    begin per column).
    """
    order = topological_order(d)
    num_rows, num_cols = dims.num_rows, dims.num_cols
    free = [[True] * num_cols for _ in range(num_rows)]
    load_cols: set[int] = set()
    store_cols: set[int] = set()
    placed: dict[int, Placement] = {}

    for op_id in order:
        op = d.ops[op_id]
        width = op_width(op.opcode)
        earliest = 0
        for ref in op.sources:
            if ref.kind is RefKind.OP:
                earliest = max(earliest, placed[ref.index].col_end)

        spot = None
        for col in range(earliest, num_cols - width + 1):
            if op.opcode is Opcode.LOAD and col in load_cols:
                continue
            if op.opcode is Opcode.STORE and col in store_cols:
                continue
            for row in range(num_rows):
                if all(free[row][c] for c in range(col, col + width)):
                    spot = (row, col)
                    break
            if spot is not None:
                break
        if spot is None:
            raise DoesNotFitError(op_id, earliest, dims)

        row, col = spot
        for c in range(col, col + width):
            free[row][c] = False
        if op.opcode is Opcode.LOAD:
            load_cols.add(col)
        elif op.opcode is Opcode.STORE:
            store_cols.add(col)
        placed[op_id] = Placement(op_id=op_id, row=row, col_start=col, width=width)

    placements = tuple(placed[i] for i in range(len(d.ops)))
    num_cols_used = max((p.col_end for p in placements), default=0)
    num_rows_used = max((p.row for p in placements), default=-1) + 1
    return VirtualConfiguration(
        dfg=d,
        placements=placements,
        num_cols_used=num_cols_used,
        num_rows_used=num_rows_used,
    )


def context_pressure(vc: VirtualConfiguration) -> int:
    """Maximum number of live values crossing any column boundary.

    A value is live at boundary b when it is already available (inputs from
    boundary 0, op results from their completion boundary) and still has a
    consumer at or beyond b.  Op sources consume at the consumer's starting
    column; DFG outputs consume at the last used boundary.
    """
    used = vc.num_cols_used
    available: dict[tuple[str, int], int] = {}
    last_use: dict[tuple[str, int], int] = {}

    for i in range(vc.dfg.num_inputs):
        available[("in", i)] = 0
    for p in vc.placements:
        available[("op", p.op_id)] = p.col_end

    def consume(ref, boundary: int) -> None:
        key = (("in", ref.index) if ref.kind is RefKind.INPUT else ("op", ref.index))
        last_use[key] = max(last_use.get(key, -1), boundary)

    for op in vc.dfg.ops:
        start = vc.placement(op.id).col_start
        for ref in op.sources:
            consume(ref, start)
    for ref in vc.dfg.outputs:
        consume(ref, used)

    peak = 0
    for b in range(used + 1):
        live = sum(
            1
            for key, last in last_use.items()
            if available[key] <= b <= last
        )
        peak = max(peak, live)
    return peak


@dataclass(frozen=True)
class ContextViolation:
    pressure: int
    capacity: int


def check_context_capacity(vc: VirtualConfiguration, dims: FabricDims) -> ContextViolation | None:
    """None when the configuration's context pressure fits the fabric."""
    pressure = context_pressure(vc)
    if pressure <= dims.num_context_lines:
        return None
    return ContextViolation(pressure=pressure, capacity=dims.num_context_lines)
