"""Per-execution binding of virtual configurations to physical fabric cells.

Two policies: the conventional fixed-origin binding (logical equals physical,
every execution lands on the top-left corner) and a rotating binding that
shifts the whole configuration by a pivot offset that advances on every
execution, sweeping the entire grid so each cell carries an equal share of
the load over time.  Shifted configurations wrap around both fabric edges,
torus style.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .mapper import FabricDims, VirtualConfiguration


class AllocationPolicy(Enum):
    FIXED_ORIGIN = "fixed"
    ROTATING = "rotating"


@dataclass(frozen=True)
class Pivot:
    """Offset applied to a whole configuration for one execution."""

    row: int
    col: int


ORIGIN = Pivot(0, 0)


class PivotScheduler:
    """Emits pivots column-fastest over the grid, one per execution.

    The sequence is periodic with period num_cols * num_rows and visits
    every cell exactly once per period.  The counter never resets.
    """

    def __init__(self, dims: FabricDims, start: int = 0):
        if start < 0:
            raise ValueError("start counter must be >= 0")
        self.dims = dims
        self.count = start

    def next_pivot(self) -> Pivot:
        k = self.count
        self.count += 1
        num_cols = self.dims.num_cols
        return Pivot(row=(k // num_cols) % self.dims.num_rows, col=k % num_cols)


@dataclass
class PhysicalAllocation:
    """Toroidal translation of a virtual configuration by one pivot.

    cell_map lists, per op id, the physical cells its placement occupies:
    logical (r, c) lands on ((r + pivot.row) mod num_rows,
    (c + pivot.col) mod num_cols).
    """

    vc: VirtualConfiguration
    pivot: Pivot
    dims: FabricDims
    cell_map: dict[int, tuple[tuple[int, int], ...]]

    def occupied_cells(self) -> list[tuple[int, int]]:
        return [cell for cells in self.cell_map.values() for cell in cells]


def allocate(vc: VirtualConfiguration, pivot: Pivot, dims: FabricDims) -> PhysicalAllocation:
    """Bind a configuration at the given pivot; pure, always legal.

    Translation is a bijection on the torus, so a legal virtual configuration
    stays overlap-free at every pivot; memory ops may straddle the physical
    right edge via wrap-around.
    """
    num_rows, num_cols = dims.num_rows, dims.num_cols
    if not (0 <= pivot.row < num_rows and 0 <= pivot.col < num_cols):
        raise ValueError(f"pivot {pivot} outside {num_cols}x{num_rows} fabric")
    cell_map: dict[int, tuple[tuple[int, int], ...]] = {}
    for p in vc.placements:
        row = (p.row + pivot.row) % num_rows
        cell_map[p.op_id] = tuple(
            (row, (c + pivot.col) % num_cols) for c in range(p.col_start, p.col_end)
        )
    return PhysicalAllocation(vc=vc, pivot=pivot, dims=dims, cell_map=cell_map)


def pivot_for_execution(policy: AllocationPolicy, scheduler: PivotScheduler) -> Pivot:
    """Pivot for the next execution; only ROTATING advances the scheduler."""
    if policy is AllocationPolicy.FIXED_ORIGIN:
        return ORIGIN
    return scheduler.next_pivot()
