"""Dataflow workloads: straight-line DFGs plus an execution trace.

A workload bundles one or more dataflow graphs with a trace that says which
graph executes and how many times in a row.  Each graph is a straight-line
region: operations read either external inputs or results of other operations
in the same graph, with no loops and no branches.

Value semantics are 32-bit two's-complement with wrapping arithmetic.  Shift
amounts use the low 5 bits.  ``cmplt`` compares signed values and yields 0/1.
``shr`` is a logical right shift.

Workload file format (JSON, ``"format": 1``)::

    {
      "format": 1,
      "dfgs": [
        {"name": "dfg0",
         "num_inputs": 2,
         "ops": [
           {"id": 0, "opcode": "add",
            "srcs": [{"kind": "input", "index": 0},
                     {"kind": "input", "index": 1}]}
         ],
         "outputs": [{"kind": "op", "index": 0}]}
      ],
      "trace": [[0, 1]]
    }

Opcode strings are the lowercase enum names.  ``load`` takes one source (the
address); ``store`` takes two (address, value) and produces no value; every
other opcode takes exactly two sources.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass
from enum import Enum

WORKLOAD_FORMAT = 1
WORD_MASK = 0xFFFFFFFF


class WorkloadError(ValueError):
    """Base class for workload file and structure errors."""


class WorkloadSyntaxError(WorkloadError):
    """Input text is not well-formed (position reported in the message)."""


class WorkloadSemanticError(WorkloadError):
    """Structurally valid text describing an invalid workload."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class DfgCycleError(WorkloadError):
    """A DFG contains a dependency cycle."""


class Opcode(Enum):
    ADD = "add"
    SUB = "sub"
    AND = "and"
    OR = "or"
    XOR = "xor"
    SHL = "shl"
    SHR = "shr"
    CMPLT = "cmplt"
    LOAD = "load"
    STORE = "store"

    @property
    def is_memory(self) -> bool:
        return self in (Opcode.LOAD, Opcode.STORE)

    @property
    def arity(self) -> int:
        if self is Opcode.LOAD:
            return 1
        return 2


ALU_OPCODES = tuple(op for op in Opcode if not op.is_memory)


class RefKind(Enum):
    INPUT = "input"
    OP = "op"


@dataclass(frozen=True)
class ValueRef:
    """Reference to a value: an external input slot or a producer op id."""

    kind: RefKind
    index: int


def input_ref(index: int) -> ValueRef:
    return ValueRef(RefKind.INPUT, index)


def op_ref(index: int) -> ValueRef:
    return ValueRef(RefKind.OP, index)


@dataclass(frozen=True)
class Operation:
    id: int
    opcode: Opcode
    sources: tuple[ValueRef, ...]

    @property
    def address_source(self) -> ValueRef | None:
        """Address operand of a memory op (first source), else None."""
        if self.opcode.is_memory and self.sources:
            return self.sources[0]
        return None

    @property
    def store_value(self) -> ValueRef | None:
        """Value operand of a store (second source), else None."""
        if self.opcode is Opcode.STORE and len(self.sources) > 1:
            return self.sources[1]
        return None


@dataclass(frozen=True)
class Dfg:
    name: str
    num_inputs: int
    ops: tuple[Operation, ...]
    outputs: tuple[ValueRef, ...]


@dataclass(frozen=True)
class Workload:
    dfgs: tuple[Dfg, ...]
    trace: tuple[tuple[int, int], ...]

    @property
    def total_executions(self) -> int:
        return sum(reps for _, reps in self.trace)


def validate_dfg(d: Dfg) -> list[str]:
    """Check all DFG invariants; returns violation messages (empty = valid).

    Checks: dense ids matching list positions, per-opcode source arity,
    reference bounds, stores never sourced as values, and acyclicity.
    """
    violations: list[str] = []
    n = len(d.ops)
    if d.num_inputs < 0:
        violations.append(f"num_inputs is {d.num_inputs}, must be >= 0")

    ids_ok = True
    for pos, op in enumerate(d.ops):
        if op.id != pos:
            violations.append(f"op at position {pos} has id {op.id}; ids must be dense 0..{n - 1}")
            ids_ok = False

    def check_ref(ref: ValueRef, where: str) -> None:
        if ref.kind is RefKind.INPUT:
            if not 0 <= ref.index < d.num_inputs:
                violations.append(f"{where} references nonexistent input {ref.index} (have {d.num_inputs})")
        else:
            if not 0 <= ref.index < n:
                violations.append(f"{where} references nonexistent op {ref.index}")
            elif ids_ok and d.ops[ref.index].opcode is Opcode.STORE:
                violations.append(f"{where} sources op {ref.index}, a store, which produces no value")

    for op in d.ops:
        want = op.opcode.arity
        if len(op.sources) != want:
            violations.append(
                f"op {op.id}: {op.opcode.value} takes {want} source(s), got {len(op.sources)}"
            )
        for ref in op.sources:
            check_ref(ref, f"op {op.id}")
    for k, ref in enumerate(d.outputs):
        check_ref(ref, f"output {k}")

    if ids_ok:
        violations.extend(_find_cycles(d))
    return violations


def _find_cycles(d: Dfg) -> list[str]:
    """DFS cycle detection; reports the op id where each cycle closes."""
    n = len(d.ops)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * n
    reported: list[str] = []
    seen_targets: set[int] = set()

    for root in range(n):
        if color[root] != WHITE:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            node, edge_idx = stack[-1]
            producers = [r.index for r in d.ops[node].sources
                         if r.kind is RefKind.OP and 0 <= r.index < n]
            if edge_idx < len(producers):
                stack[-1] = (node, edge_idx + 1)
                nxt = producers[edge_idx]
                if color[nxt] == GRAY:
                    if nxt not in seen_targets:
                        seen_targets.add(nxt)
                        reported.append(f"cycle at op {nxt}")
                elif color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                stack.pop()
    return reported


def topological_order(d: Dfg) -> list[int]:
    """Dependency-respecting op order; ties broken by ascending id."""
    n = len(d.ops)
    producers: list[set[int]] = []
    consumers: dict[int, set[int]] = {i: set() for i in range(n)}
    for op in d.ops:
        prods = {r.index for r in op.sources if r.kind is RefKind.OP}
        if any(not 0 <= p < n for p in prods):
            raise WorkloadSemanticError([f"op {op.id} references nonexistent op"])
        producers.append(prods)
        for p in prods:
            consumers[p].add(op.id)

    indegree = [len(p) for p in producers]
    ready = [i for i in range(n) if indegree[i] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for c in sorted(consumers[node]):
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != n:
        stuck = min(i for i in range(n) if indegree[i] > 0)
        raise DfgCycleError(f"cycle detected at op {stuck}")
    return order


# ---------------------------------------------------------------------------
# File I/O
# ---------------------------------------------------------------------------

def parse_workload(text: str) -> Workload:
    """Parse and validate a workload file; round-trips with serialize_workload."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise WorkloadSyntaxError(f"line {e.lineno}, column {e.colno}: {e.msg}") from e

    problems: list[str] = []
    if not isinstance(doc, dict):
        raise WorkloadSemanticError(["top level must be an object"])
    if doc.get("format") != WORKLOAD_FORMAT:
        raise WorkloadSemanticError(
            [f"unsupported format {doc.get('format')!r}, expected {WORKLOAD_FORMAT}"]
        )

    raw_dfgs = doc.get("dfgs")
    raw_trace = doc.get("trace")
    if not isinstance(raw_dfgs, list):
        raise WorkloadSemanticError(["'dfgs' must be a list"])
    if not isinstance(raw_trace, list):
        raise WorkloadSemanticError(["'trace' must be a list"])

    dfgs = []
    for di, raw in enumerate(raw_dfgs):
        dfg = _parse_dfg(raw, f"dfgs[{di}]", problems)
        if dfg is not None:
            dfgs.append(dfg)
    if problems:
        raise WorkloadSemanticError(problems)

    for di, dfg in enumerate(dfgs):
        for v in validate_dfg(dfg):
            problems.append(f"dfgs[{di}]: {v}")

    if not raw_trace:
        problems.append("empty trace")
    trace = []
    for ti, entry in enumerate(raw_trace):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry)):
            problems.append(f"trace[{ti}]: must be [dfg_index, repeat_count]")
            continue
        idx, reps = entry
        if not 0 <= idx < len(dfgs):
            problems.append(f"trace[{ti}]: dfg index {idx} out of range")
        if reps < 1:
            problems.append(f"trace[{ti}]: repeat count {reps} must be >= 1")
        trace.append((idx, reps))

    if problems:
        raise WorkloadSemanticError(problems)
    return Workload(dfgs=tuple(dfgs), trace=tuple(trace))


def _parse_dfg(raw: object, where: str, problems: list[str]) -> Dfg | None:
    if not isinstance(raw, dict):
        problems.append(f"{where}: must be an object")
        return None
    name = raw.get("name")
    num_inputs = raw.get("num_inputs")
    raw_ops = raw.get("ops")
    raw_outputs = raw.get("outputs")
    if not isinstance(name, str):
        problems.append(f"{where}: 'name' must be a string")
        return None
    if not isinstance(num_inputs, int) or isinstance(num_inputs, bool):
        problems.append(f"{where}: 'num_inputs' must be an integer")
        return None
    if not isinstance(raw_ops, list) or not isinstance(raw_outputs, list):
        problems.append(f"{where}: 'ops' and 'outputs' must be lists")
        return None

    ops = []
    for oi, rop in enumerate(raw_ops):
        if not isinstance(rop, dict):
            problems.append(f"{where}.ops[{oi}]: must be an object")
            return None
        try:
            opcode = Opcode(rop.get("opcode"))
        except ValueError:
            problems.append(f"{where}.ops[{oi}]: unknown opcode {rop.get('opcode')!r}")
            return None
        op_id = rop.get("id")
        raw_srcs = rop.get("srcs")
        if not isinstance(op_id, int) or isinstance(op_id, bool):
            problems.append(f"{where}.ops[{oi}]: 'id' must be an integer")
            return None
        if not isinstance(raw_srcs, list):
            problems.append(f"{where}.ops[{oi}]: 'srcs' must be a list")
            return None
        srcs = []
        for si, rref in enumerate(raw_srcs):
            ref = _parse_ref(rref, f"{where}.ops[{oi}].srcs[{si}]", problems)
            if ref is None:
                return None
            srcs.append(ref)
        ops.append(Operation(id=op_id, opcode=opcode, sources=tuple(srcs)))

    outputs = []
    for ri, rref in enumerate(raw_outputs):
        ref = _parse_ref(rref, f"{where}.outputs[{ri}]", problems)
        if ref is None:
            return None
        outputs.append(ref)
    return Dfg(name=name, num_inputs=num_inputs, ops=tuple(ops), outputs=tuple(outputs))


def _parse_ref(raw: object, where: str, problems: list[str]) -> ValueRef | None:
    if not isinstance(raw, dict):
        problems.append(f"{where}: must be an object")
        return None
    try:
        kind = RefKind(raw.get("kind"))
    except ValueError:
        problems.append(f"{where}: kind must be 'input' or 'op'")
        return None
    index = raw.get("index")
    if not isinstance(index, int) or isinstance(index, bool):
        problems.append(f"{where}: 'index' must be an integer")
        return None
    return ValueRef(kind, index)


def serialize_workload(w: Workload) -> str:
    """Canonical text form; parse_workload(serialize_workload(w)) == w."""
    doc = {
        "format": WORKLOAD_FORMAT,
        "dfgs": [
            {
                "name": d.name,
                "num_inputs": d.num_inputs,
                "ops": [
                    {
                        "id": op.id,
                        "opcode": op.opcode.value,
                        "srcs": [{"kind": r.kind.value, "index": r.index} for r in op.sources],
                    }
                    for op in d.ops
                ],
                "outputs": [{"kind": r.kind.value, "index": r.index} for r in d.outputs],
            }
            for d in w.dfgs
        ],
        "trace": [[idx, reps] for idx, reps in w.trace],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Synthetic workload generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for synthetic workload generation.

    The size distribution of real translated regions is not prescribed
    anywhere; these defaults are a pragmatic choice, not a derived one.
    """

    num_dfgs: int = 20
    ops_per_dfg: tuple[int, int] = (3, 10)
    memory_op_fraction: float = 0.15
    num_inputs: int = 4
    trace_length: int = 100
    max_repeat: int = 8
    max_outputs: int = 3


def generate_random_workload(params: GeneratorParams, seed: int) -> Workload:
    """Deterministic synthetic workload; all generated DFGs are valid.

    Raises ValueError for infeasible parameters (e.g. zero inputs, since
    every op needs at least one available source value).
    """
    lo, hi = params.ops_per_dfg
    if params.num_dfgs < 1:
        raise ValueError("num_dfgs must be >= 1")
    if not 1 <= lo <= hi:
        raise ValueError(f"ops_per_dfg range ({lo}, {hi}) must satisfy 1 <= lo <= hi")
    if not 0.0 <= params.memory_op_fraction <= 1.0:
        raise ValueError("memory_op_fraction must be in [0, 1]")
    if params.num_inputs < 1:
        raise ValueError("num_inputs must be >= 1 (ops need source values)")
    if params.trace_length < 1:
        raise ValueError("trace_length must be >= 1")
    if params.max_repeat < 1:
        raise ValueError("max_repeat must be >= 1")
    if params.max_outputs < 1:
        raise ValueError("max_outputs must be >= 1")

    rng = random.Random(seed)
    dfgs = []
    for di in range(params.num_dfgs):
        n_ops = rng.randint(lo, hi)
        available = [input_ref(i) for i in range(params.num_inputs)]
        ops = []
        for oid in range(n_ops):
            if rng.random() < params.memory_op_fraction:
                opcode = Opcode.LOAD if rng.random() < 0.5 else Opcode.STORE
            else:
                opcode = rng.choice(ALU_OPCODES)
            srcs = tuple(rng.choice(available) for _ in range(opcode.arity))
            ops.append(Operation(id=oid, opcode=opcode, sources=srcs))
            if opcode is not Opcode.STORE:
                available.append(op_ref(oid))
        k = min(len(available), rng.randint(1, params.max_outputs))
        outputs = tuple(rng.sample(available, k))
        dfgs.append(Dfg(name=f"dfg{di}", num_inputs=params.num_inputs,
                        ops=tuple(ops), outputs=outputs))

    trace = tuple(
        (rng.randrange(params.num_dfgs), rng.randint(1, params.max_repeat))
        for _ in range(params.trace_length)
    )
    return Workload(dfgs=tuple(dfgs), trace=trace)
