"""
Circuit data model and the structural metrics reported by the harness.

Contains:
    - GateKind: the fixed gate vocabulary
    - Gate: one primitive operation (kind, qubit operands, optional angle)
    - Circuit: immutable ordered gate list over a fixed qubit count
    - CouplingMap: undirected connectivity over physical qubits
    - depth / two_qubit_count / validate
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

ANGLE_TOL = 1e-12


class GateKind(str, Enum):
    H = "h"
    X = "x"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CX = "cx"
    CZ = "cz"
    CP = "cp"
    SWAP = "swap"
    CCX = "ccx"

    @property
    def arity(self) -> int:
        if self in _TWO_QUBIT:
            return 2
        if self is GateKind.CCX:
            return 3
        return 1

    @property
    def has_param(self) -> bool:
        return self in _PARAMETRIC


_TWO_QUBIT = frozenset({GateKind.CX, GateKind.CZ, GateKind.CP, GateKind.SWAP})
_PARAMETRIC = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CP})
CLIFFORD_KINDS = frozenset({GateKind.H, GateKind.S, GateKind.X, GateKind.CX, GateKind.CZ, GateKind.SWAP})


@dataclass(frozen=True)
class Gate:
    """A gate applied to ``qubits`` in operand order (controls first)."""

    kind: GateKind
    qubits: tuple[int, ...]
    param: float | None = None

    def __post_init__(self):
        # Normalise operand containers so equality is structural.
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.param is not None:
            object.__setattr__(self, "param", float(self.param))

    def __repr__(self) -> str:
        args = ",".join(f"q{q}" for q in self.qubits)
        if self.param is None:
            return f"{self.kind.name}({args})"
        return f"{self.kind.name}[{self.param:.6g}]({args})"

    def remap(self, mapping: Sequence[int]) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.param)


# Constructors, mostly used by generators and tests.
def h(q): return Gate(GateKind.H, (q,))
def x(q): return Gate(GateKind.X, (q,))
def s(q): return Gate(GateKind.S, (q,))
def sdg(q): return Gate(GateKind.SDG, (q,))
def t(q): return Gate(GateKind.T, (q,))
def tdg(q): return Gate(GateKind.TDG, (q,))
def rx(theta, q): return Gate(GateKind.RX, (q,), theta)
def ry(theta, q): return Gate(GateKind.RY, (q,), theta)
def rz(theta, q): return Gate(GateKind.RZ, (q,), theta)
def cx(c, tgt): return Gate(GateKind.CX, (c, tgt))
def cz(a, b): return Gate(GateKind.CZ, (a, b))
def cp(theta, c, tgt): return Gate(GateKind.CP, (c, tgt), theta)
def swap(a, b): return Gate(GateKind.SWAP, (a, b))
def ccx(c0, c1, tgt): return Gate(GateKind.CCX, (c0, c1, tgt))


@dataclass(frozen=True)
class Circuit:
    """Immutable gate sequence. Equality ignores ``name`` (structural comparison)."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    name: str = field(default="circuit", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.num_qubits, self.gates + other.gates, self.name)

    def with_gates(self, gates: Iterable[Gate], num_qubits: int | None = None) -> Circuit:
        n = self.num_qubits if num_qubits is None else num_qubits
        return Circuit(n, tuple(gates), self.name)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    def kinds(self) -> set[GateKind]:
        return {g.kind for g in self.gates}

    def remap(self, mapping: Sequence[int], num_qubits: int | None = None) -> Circuit:
        """Relabel qubit ``q`` as ``mapping[q]``."""
        return self.with_gates((g.remap(mapping) for g in self.gates), num_qubits)


def depth(c: Circuit) -> int:
    """Number of layers in an as-soon-as-possible layering; every gate has weight 1."""
    level = [0] * c.num_qubits
    best = 0
    for g in c.gates:
        d = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = d
        best = max(best, d)
    return best


def two_qubit_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if len(g.qubits) == 2)


def validate(c: Circuit) -> list[str]:
    """Return every invariant violation in ``c``; an empty list means valid."""
    problems = []
    if c.num_qubits < 1:
        problems.append(f"num_qubits must be positive, got {c.num_qubits}")
    for i, g in enumerate(c.gates):
        where = f"gate {i} ({g.kind.name})"
        if len(g.qubits) != g.kind.arity:
            problems.append(f"{where}: arity mismatch, expected {g.kind.arity} operands, got {len(g.qubits)}")
        for q in g.qubits:
            if q < 0 or q >= c.num_qubits:
                problems.append(f"{where}: operand out of range: q{q} on {c.num_qubits}-qubit circuit")
        if len(set(g.qubits)) != len(g.qubits):
            problems.append(f"{where}: repeated operand {g.qubits}")
        if g.kind.has_param and g.param is None:
            problems.append(f"{where}: missing parameter")
        elif not g.kind.has_param and g.param is not None:
            problems.append(f"{where}: unexpected parameter")
        elif g.param is not None and not math.isfinite(g.param):
            problems.append(f"{where}: non-finite parameter {g.param}")
    return problems


class CouplingMap:
    """Undirected, connected qubit connectivity graph."""

    def __init__(self, num_qubits: int, edges: Iterable[tuple[int, int]], name: str = "custom"):
        if num_qubits < 1:
            raise ValueError("coupling map needs at least one qubit")
        self.num_qubits = num_qubits
        self.name = name
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-loop on qubit {a}")
            if not (0 <= a < num_qubits and 0 <= b < num_qubits):
                raise ValueError(f"edge ({a}, {b}) out of range for {num_qubits} qubits")
            norm.add((min(a, b), max(a, b)))
        self.edges = frozenset(norm)
        self._adj: list[list[int]] = [[] for _ in range(num_qubits)]
        for a, b in sorted(self.edges):
            self._adj[a].append(b)
            self._adj[b].append(a)
        for nbrs in self._adj:
            nbrs.sort()
        if not self._connected():
            raise ValueError("coupling map is disconnected")

    def __repr__(self) -> str:
        return f"CouplingMap({self.name}, n={self.num_qubits}, edges={sorted(self.edges)})"

    def neighbors(self, q: int) -> list[int]:
        return self._adj[q]

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def distances_from(self, src: int) -> list[int]:
        dist = [-1] * self.num_qubits
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def shortest_path(self, src: int, dst: int) -> list[int]:
        """Lexicographically smallest among the shortest paths from ``src`` to ``dst``."""
        to_dst = self.distances_from(dst)
        path = [src]
        while path[-1] != dst:
            u = path[-1]
            # neighbours are sorted, so the first one on a shortest path is the smallest
            path.append(next(v for v in self._adj[u] if to_dst[v] == to_dst[u] - 1))
        return path

    def _connected(self) -> bool:
        return all(d >= 0 for d in self.distances_from(0))

    @classmethod
    def linear(cls, n: int) -> CouplingMap:
        return cls(n, [(i, i + 1) for i in range(n - 1)], name="linear")

    @classmethod
    def ring(cls, n: int) -> CouplingMap:
        edges = [(i, i + 1) for i in range(n - 1)]
        if n > 2:
            edges.append((n - 1, 0))
        return cls(n, edges, name="ring")

    @classmethod
    def grid(cls, n: int) -> CouplingMap:
        """Row-major near-square grid truncated to ``n`` nodes (8 -> 2x4)."""
        rows = max(1, math.isqrt(n))
        cols = -(-n // rows)
        edges = []
        for i in range(n):
            r, col = divmod(i, cols)
            if col + 1 < cols and i + 1 < n:
                edges.append((i, i + 1))
            if i + cols < n:
                edges.append((i, i + cols))
        return cls(n, edges, name="grid")

    @classmethod
    def named(cls, kind: str, n: int) -> CouplingMap:
        try:
            factory = {"linear": cls.linear, "ring": cls.ring, "grid": cls.grid}[kind]
        except KeyError:
            raise ValueError(f"unknown coupling map {kind!r}") from None
        return factory(n)
