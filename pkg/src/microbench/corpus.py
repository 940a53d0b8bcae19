"""
Deterministic generators for the six benchmark circuits.

Every generator is a pure function of its arguments; the random Clifford
circuit draws from :class:`SplitMix64` so the same seed gives the same
circuit on any platform.
"""
from __future__ import annotations

import math

from .ir import Circuit, Gate, GateKind, ccx, cp, cx, h, ry, rz, swap, x

DEFAULT_SEED = 42
MASK64 = (1 << 64) - 1


class SplitMix64:
    """Steele/Lea/Flood splitmix64. ``below(n)`` reduces by modulo."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        return self.next() % n

    def shuffle(self, items: list) -> None:
        # Fisher-Yates, high index down
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def build_adder() -> Circuit:
    """1-bit full adder (VBE carry/sum blocks) on four qubits.

    Layout: q0 = carry-in, q1 = a, q2 = b, q3 = carry-out (starts at 0).
    Afterwards q2 holds ``a ^ b ^ cin`` and q3 holds the carry, so with
    ``cin = 0`` the pair (q3, q2) is the 2-bit sum ``a + b``.
    """
    gates = [
        ccx(1, 2, 3),
        cx(1, 2),
        ccx(0, 2, 3),
        cx(0, 2),
    ]
    return Circuit(4, gates, name="adder")


def build_qft(n: int = 5) -> Circuit:
    if n < 1:
        raise ValueError("QFT needs at least one qubit")
    gates: list[Gate] = []
    for j in reversed(range(n)):
        gates.append(h(j))
        for k in reversed(range(j)):
            gates.append(cp(math.pi / 2 ** (j - k), k, j))
    for i in range(n // 2):
        gates.append(swap(i, n - 1 - i))
    return Circuit(n, gates, name=f"qft{n}")


def _ccz(a: int, b: int, target: int) -> list[Gate]:
    return [h(target), ccx(a, b, target), h(target)]


def build_grover3() -> Circuit:
    """One Grover iteration over three qubits, marking ``|111>``."""
    q = range(3)
    gates = [h(i) for i in q]
    gates += _ccz(0, 1, 2)
    gates += [h(i) for i in q] + [x(i) for i in q]
    gates += _ccz(0, 1, 2)
    gates += [x(i) for i in q] + [h(i) for i in q]
    return Circuit(3, gates, name="grover3")


def build_hea(n: int = 8, layers: int = 2) -> Circuit:
    if n < 2:
        raise ValueError("HEA needs at least two qubits")
    if layers < 1:
        raise ValueError("HEA needs at least one layer")
    gates: list[Gate] = []
    k = 0

    def theta() -> float:
        nonlocal k
        k += 1
        return 0.1 * k

    for _ in range(layers):
        gates += [ry(theta(), q) for q in range(n)]
        gates += [rz(theta(), q) for q in range(n)]
        gates += [cx(q, q + 1) for q in range(n - 1)]
    return Circuit(n, gates, name=f"hea{n}")


_PAIR_KINDS = (GateKind.CX, GateKind.CZ, GateKind.SWAP)
_SINGLE_KINDS = (GateKind.H, GateKind.S, GateKind.X)


def build_random_clifford(n: int = 8, depth_layers: int = 15, seed: int = DEFAULT_SEED) -> Circuit:
    """Layered random Clifford circuit.

    Per layer: shuffle the qubits, walk them in consecutive pairs and flip a
    coin for each pair (heads: one 2-qubit gate from {CX, CZ, SWAP}; tails:
    both qubits left single). Every single qubit gets one of {H, S, X}. Each
    layer touches every qubit, so the ASAP depth equals ``depth_layers``.
    """
    if n < 2:
        raise ValueError("random Clifford needs at least two qubits")
    rng = SplitMix64(seed)
    gates: list[Gate] = []
    for _ in range(depth_layers):
        order = list(range(n))
        rng.shuffle(order)
        singles: list[int] = []
        i = 0
        while i + 1 < len(order):
            a, b = order[i], order[i + 1]
            if rng.below(2):
                gates.append(Gate(_PAIR_KINDS[rng.below(3)], (a, b)))
            else:
                singles += [a, b]
            i += 2
        if i < len(order):
            singles.append(order[i])
        for q in singles:
            gates.append(Gate(_SINGLE_KINDS[rng.below(3)], (q,)))
    return Circuit(n, gates, name=f"clifford{n}")


def _cswap(c: int, a: int, b: int) -> list[Gate]:
    return [cx(b, a), ccx(c, a, b), cx(b, a)]


def build_modmul() -> Circuit:
    """Controlled multiplication by 2 modulo 5, shift-and-reduce style.

    Layout: q0 = control, q1..q4 = data bits d0..d3 (little-endian),
    q5 = reduction flag, q6 = scratch. For ``x < 5`` and control set, the
    data register ends as ``2x mod 5`` with both ancillas back at 0; with
    control clear every gate is inert.

    1. controlled rotate-left of the data register (x < 8 so this doubles x)
    2. flag = (2x >= 5), which for even 2x <= 8 is ``d3 xor (d1 and d2)``
    3. flag-controlled map 6 -> 1, 8 -> 3 (subtract 5)
    4. the result is odd exactly when a reduction happened: clear the flag with d0
    """
    c, d0, d1, d2, d3, flag, scratch = range(7)
    gates: list[Gate] = []
    gates += _cswap(c, d3, d2) + _cswap(c, d2, d1) + _cswap(c, d1, d0)
    gates += [
        ccx(c, d3, flag),
        ccx(d1, d2, scratch),
        ccx(c, scratch, flag),
        ccx(d1, d2, scratch),
    ]
    gates += [
        cx(flag, d0),
        cx(flag, d1),
        ccx(flag, d1, d3),
        cx(flag, d2),
        ccx(flag, d1, d2),
    ]
    gates.append(ccx(c, d0, flag))
    return Circuit(7, gates, name="modmul7")


CORPUS_NAMES = ("adder", "qft5", "grover3", "hea8", "clifford8", "modmul7")


def corpus_all(seed: int = DEFAULT_SEED) -> list[Circuit]:
    return [
        build_adder(),
        build_qft(5),
        build_grover3(),
        build_hea(8, 2),
        build_random_clifford(8, 15, seed),
        build_modmul(),
    ]
