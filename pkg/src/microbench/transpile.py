"""
Built-in compilation pipelines: basis decomposition, greedy SWAP routing and
peephole optimization, combined into three presets of increasing effort.

    L0  decompose -> route
    L1  decompose -> peephole -> route -> peephole
    L2  L1 with commutation-aware CX cancellation and RZ merging,
        iterated with peephole to a joint fixed point

Routed SWAPs are lowered to three CX gates so every result is basis-only.
All equivalences hold up to global phase, which is never tracked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .ir import (
    ANGLE_TOL,
    Circuit,
    CouplingMap,
    Gate,
    GateKind,
    cx,
    depth,
    h,
    rz,
    two_qubit_count,
)

DEFAULT_BASIS = frozenset({GateKind.CX, GateKind.H, GateKind.RZ})
MAX_SWEEPS = 1000
_PI = math.pi


class DecompositionError(ValueError):
    pass


class RoutingError(ValueError):
    pass


class FixedPointError(RuntimeError):
    pass


class PipelineLevel(str, Enum):
    L0 = "L0"
    L1 = "L1"
    L2 = "L2"


@dataclass(frozen=True)
class BasisGateSet:
    kinds: frozenset[GateKind] = DEFAULT_BASIS

    def __post_init__(self):
        kinds = frozenset(GateKind(k) for k in self.kinds)
        object.__setattr__(self, "kinds", kinds)
        if not {GateKind.H, GateKind.RZ} <= kinds:
            raise ValueError("basis must contain H and RZ")
        if not kinds & {GateKind.CX, GateKind.CZ}:
            raise ValueError("basis must contain CX or CZ")

    def __contains__(self, kind) -> bool:
        return kind in self.kinds


@dataclass(frozen=True)
class TranspileResult:
    circuit: Circuit
    final_layout: tuple[int, ...]
    stats: dict[str, int] = field(default_factory=dict)


def _ccx_network(a: int, b: int, t: int) -> list[Gate]:
    T, TDG = _PI / 4, -_PI / 4
    return [
        h(t), cx(b, t), rz(TDG, t), cx(a, t), rz(T, t), cx(b, t), rz(TDG, t), cx(a, t),
        rz(T, b), rz(T, t), h(t), cx(a, b), rz(T, a), rz(TDG, b), cx(a, b),
    ]


def _rule(g: Gate, basis: BasisGateSet) -> list[Gate] | None:
    """One rewriting step for a gate outside ``basis``; None when no rule applies."""
    k, q, th = g.kind, g.qubits, g.param
    if k is GateKind.CCX:
        return _ccx_network(*q)
    if k is GateKind.SWAP:
        a, b = q
        return [cx(a, b), cx(b, a), cx(a, b)]
    if k is GateKind.CZ:
        return [h(q[1]), cx(*q), h(q[1])]
    if k is GateKind.CX and GateKind.CZ in basis:
        return [h(q[1]), Gate(GateKind.CZ, q), h(q[1])]
    if k is GateKind.CP:
        c, t = q
        return [rz(th / 2, c), cx(c, t), rz(-th / 2, t), cx(c, t), rz(th / 2, t)]
    if k is GateKind.T:
        return [rz(_PI / 4, q[0])]
    if k is GateKind.TDG:
        return [rz(-_PI / 4, q[0])]
    if k is GateKind.S:
        return [rz(_PI / 2, q[0])]
    if k is GateKind.SDG:
        return [rz(-_PI / 2, q[0])]
    if k is GateKind.X:
        return [h(q[0]), rz(_PI, q[0]), h(q[0])]
    if k is GateKind.RX:
        return [h(q[0]), rz(th, q[0]), h(q[0])]
    if k is GateKind.RY:
        return [rz(-_PI / 2, q[0]), h(q[0]), rz(th, q[0]), h(q[0]), rz(_PI / 2, q[0])]
    return None


def _lower(g: Gate, basis: BasisGateSet, out: list[Gate], nesting: int = 0) -> None:
    if g.kind in basis:
        out.append(g)
        return
    step = _rule(g, basis)
    if step is None or nesting > 8:
        raise DecompositionError(f"cannot express {g.kind.name} in basis {sorted(k.name for k in basis.kinds)}")
    for sub in step:
        _lower(sub, basis, out, nesting + 1)


def decompose_to_basis(c: Circuit, basis: BasisGateSet | None = None) -> Circuit:
    basis = basis or BasisGateSet()
    out: list[Gate] = []
    for g in c.gates:
        _lower(g, basis, out)
    return c.with_gates(out)


def route(c: Circuit, coupling: CouplingMap, initial_layout: Sequence[int] | None = None) -> TranspileResult:
    """Greedy shortest-path SWAP insertion.

    For a 2-qubit gate on non-adjacent physical qubits, the endpoint with the
    lower physical index walks along the lexicographically smallest shortest
    path toward the other until they touch. The output acts on physical
    qubits, contains the inserted SWAP gates, and the final permutation is
    left in place (``final_layout[logical] = physical``).
    """
    n = coupling.num_qubits
    if c.num_qubits > n:
        raise RoutingError(f"circuit needs {c.num_qubits} qubits, coupling map has {n}")
    layout = list(range(n)) if initial_layout is None else list(initial_layout)
    if sorted(layout) != list(range(n)):
        raise RoutingError(f"initial layout {layout} is not a permutation of 0..{n - 1}")
    phys_to_log = [0] * n
    for logical, p in enumerate(layout):
        phys_to_log[p] = logical

    def do_swap(p0: int, p1: int) -> None:
        l0, l1 = phys_to_log[p0], phys_to_log[p1]
        phys_to_log[p0], phys_to_log[p1] = l1, l0
        layout[l0], layout[l1] = p1, p0
        out.append(Gate(GateKind.SWAP, (p0, p1)))

    out: list[Gate] = []
    swaps = 0
    for g in c.gates:
        if len(g.qubits) > 2:
            raise RoutingError(f"{g.kind.name} must be decomposed before routing")
        if len(g.qubits) == 2:
            pa, pb = layout[g.qubits[0]], layout[g.qubits[1]]
            if not coupling.adjacent(pa, pb):
                src, dst = min(pa, pb), max(pa, pb)
                path = coupling.shortest_path(src, dst)
                for i in range(len(path) - 2):
                    do_swap(path[i], path[i + 1])
                    swaps += 1
        out.append(g.remap(layout))
    return TranspileResult(Circuit(n, out, c.name), tuple(layout), {"route_swaps": swaps})


def _is_zero_angle(theta: float) -> bool:
    r = math.fmod(theta, 2 * _PI)
    return min(abs(r), 2 * _PI - abs(r)) < ANGLE_TOL


def _peephole_sweep(gates: Sequence[Gate], n: int) -> tuple[list[Gate], bool]:
    """One left-to-right pass; stacks of per-qubit last-live-gate indices."""
    out: list[Gate | None] = []
    last: list[list[int]] = [[] for _ in range(n)]
    changed = False

    def top(q):
        return last[q][-1] if last[q] else None

    def push(g):
        out.append(g)
        for q in g.qubits:
            last[q].append(len(out) - 1)

    def drop(i):
        for q in out[i].qubits:
            last[q].pop()
        out[i] = None

    for g in gates:
        k = g.kind
        if k is GateKind.RZ and _is_zero_angle(g.param):
            changed = True
            continue
        prev_i = top(g.qubits[0])
        prev = out[prev_i] if prev_i is not None else None
        if prev is not None and all(top(q) == prev_i for q in g.qubits):
            if k in (GateKind.H, GateKind.CX) and prev == g:
                drop(prev_i)
                changed = True
                continue
            if k is GateKind.RZ and prev.kind is GateKind.RZ:
                merged = prev.param + g.param
                changed = True
                if _is_zero_angle(merged):
                    drop(prev_i)
                else:
                    out[prev_i] = rz(merged, g.qubits[0])
                continue
        push(g)
    return [g for g in out if g is not None], changed


def _to_fixed_point(gates: list[Gate], step) -> tuple[list[Gate], int]:
    for sweep in range(MAX_SWEEPS):
        gates, changed = step(gates)
        if not changed:
            return gates, sweep
    raise FixedPointError(f"no fixed point after {MAX_SWEEPS} sweeps")


def peephole(c: Circuit) -> Circuit:
    """Cancel adjacent H·H and CX·CX, merge adjacent RZ rotations, drop zero RZ."""
    gates, _ = _to_fixed_point(list(c.gates), lambda gs: _peephole_sweep(gs, c.num_qubits))
    return c.with_gates(gates)


def _commutes_with_cx(g: Gate, ctrl: int, tgt: int) -> bool:
    """Commutation table for gates sharing a qubit with CX(ctrl, tgt)."""
    k, q = g.kind, g.qubits
    if k in (GateKind.RZ, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG):
        return q[0] == ctrl
    if k in (GateKind.X, GateKind.RX):
        return q[0] == tgt
    if k is GateKind.CX:
        c2, t2 = q
        return (c2 == ctrl and t2 != tgt) or (t2 == tgt and c2 != ctrl)
    if k is GateKind.CZ:
        return tgt not in q
    return False


def _commute_cancel_sweep(gates: Sequence[Gate]) -> tuple[list[Gate], bool]:
    gates = list(gates)
    removed = [False] * len(gates)
    changed = False
    for i, g in enumerate(gates):
        if removed[i] or g.kind is not GateKind.CX:
            continue
        ctrl, tgt = g.qubits
        for j in range(i + 1, len(gates)):
            other = gates[j]
            if removed[j] or (ctrl not in other.qubits and tgt not in other.qubits):
                continue
            if other == g:
                removed[i] = removed[j] = True
                changed = True
                break
            if not _commutes_with_cx(other, ctrl, tgt):
                break
    return [g for g, r in zip(gates, removed) if not r], changed


def commute_cancel(c: Circuit) -> Circuit:
    """Cancel CX pairs separated only by gates that commute with that CX."""
    gates, _ = _to_fixed_point(list(c.gates), _commute_cancel_sweep)
    return c.with_gates(gates)


def _rz_merge_sweep(gates: Sequence[Gate]) -> tuple[list[Gate], bool]:
    gates = list(gates)
    removed = [False] * len(gates)
    changed = False
    for i, g in enumerate(gates):
        if removed[i] or g.kind is not GateKind.RZ:
            continue
        q = g.qubits[0]
        for j in range(i + 1, len(gates)):
            other = gates[j]
            if removed[j] or q not in other.qubits:
                continue
            if other.kind is GateKind.RZ:
                gates[j] = rz(g.param + other.param, q)
                removed[i] = changed = True
                break
            # diagonal on q: CX control side, CZ either side
            if (other.kind is GateKind.CX and other.qubits[0] == q) or other.kind is GateKind.CZ:
                continue
            break
    return [g for g, r in zip(gates, removed) if not r], changed


def commute_merge_rz(c: Circuit) -> Circuit:
    """Merge RZ rotations on one qubit separated only by gates diagonal on that qubit."""
    gates, _ = _to_fixed_point(list(c.gates), _rz_merge_sweep)
    return c.with_gates(gates)


def _optimize_l2(c: Circuit) -> Circuit:
    def step(gates):
        circ = c.with_gates(gates)
        after = commute_merge_rz(commute_cancel(peephole(circ)))
        return list(after.gates), after != circ

    gates, _ = _to_fixed_point(list(c.gates), step)
    return c.with_gates(gates)


def _delta(stats: dict, key: str, before: Circuit, after: Circuit) -> None:
    stats[key] = stats.get(key, 0) + len(after) - len(before)


def run_pipeline(
    c: Circuit,
    level: PipelineLevel | str,
    coupling: CouplingMap | None = None,
    basis: BasisGateSet | None = None,
) -> TranspileResult:
    """Compile ``c`` at ``level`` for ``coupling`` (default: linear chain of c's width).

    ``stats`` maps pass name to net change in gate count.
    """
    level = PipelineLevel(level)
    basis = basis or BasisGateSet()
    coupling = coupling or CouplingMap.linear(c.num_qubits)
    optimize = {PipelineLevel.L0: None, PipelineLevel.L1: peephole, PipelineLevel.L2: _optimize_l2}[level]
    stats: dict[str, int] = {}

    cur = decompose_to_basis(c, basis)
    _delta(stats, "decompose", c, cur)
    if optimize:
        nxt = optimize(cur)
        _delta(stats, "optimize_pre", cur, nxt)
        cur = nxt
    routed = route(cur, coupling)
    stats.update(routed.stats)
    lowered = decompose_to_basis(routed.circuit, basis)
    _delta(stats, "route", cur, lowered)
    cur = lowered
    if optimize:
        nxt = optimize(cur)
        _delta(stats, "optimize_post", cur, nxt)
        cur = nxt
    return TranspileResult(cur, routed.final_layout, stats)


def coupling_violations(c: Circuit, coupling: CouplingMap) -> list[tuple[int, Gate]]:
    return [(i, g) for i, g in enumerate(c.gates) if len(g.qubits) == 2 and not coupling.adjacent(*g.qubits)]


def summarize(c: Circuit) -> dict[str, int]:
    return {"depth": depth(c), "twoq": two_qubit_count(c), "gates": len(c)}
