"""
Dense statevector simulator used as the correctness oracle.

Indexing convention: qubit 0 is the least-significant bit of the amplitude
index, so basis state ``|q_{n-1} ... q_1 q_0>`` lives at ``sum(q_k << k)``.
Multi-qubit gate matrices are written with the first operand as the most
significant local bit (textbook CX = [[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]).
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from .ir import Circuit, Gate, GateKind

MAX_QUBITS = 12
EXHAUSTIVE_MAX = 6
SAMPLED_STATES = 20
PHASE_EPS = 1e-8


class CapacityError(ValueError):
    pass


_S2 = 1 / math.sqrt(2)
_FIXED = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, cmath.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, cmath.exp(-1j * math.pi / 4)]),
    GateKind.CX: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_CCX = np.eye(8, dtype=complex)
_CCX[[6, 7]] = _CCX[[7, 6]]
_FIXED[GateKind.CCX] = _CCX


def gate_matrix(g: Gate) -> np.ndarray:
    if g.kind in _FIXED:
        return _FIXED[g.kind]
    th = g.param
    c, s_ = math.cos(th / 2), math.sin(th / 2)
    if g.kind is GateKind.RX:
        return np.array([[c, -1j * s_], [-1j * s_, c]], dtype=complex)
    if g.kind is GateKind.RY:
        return np.array([[c, -s_], [s_, c]], dtype=complex)
    if g.kind is GateKind.RZ:
        return np.diag([cmath.exp(-0.5j * th), cmath.exp(0.5j * th)])
    if g.kind is GateKind.CP:
        return np.diag([1, 1, 1, cmath.exp(1j * th)])
    raise ValueError(f"no matrix for {g.kind}")


def _apply(psi: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply ``g`` to ``psi`` of shape (2,)*n + batch. Axis ``n-1-q`` holds qubit ``q``."""
    k = len(g.qubits)
    axes = [n - 1 - q for q in g.qubits]
    m = gate_matrix(g).reshape((2,) * (2 * k))
    out = np.tensordot(m, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the gate's output axes first; move them back into place
    return np.moveaxis(out, list(range(k)), axes)


def _evolve(c: Circuit, states: np.ndarray) -> np.ndarray:
    """Evolve a (2**n, batch) array of column states."""
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds simulator cap of {MAX_QUBITS}")
    batch = states.shape[1]
    psi = states.reshape((2,) * n + (batch,))
    for g in c.gates:
        psi = _apply(psi, g, n)
    return np.ascontiguousarray(psi).reshape(2**n, batch)


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1
    return psi


def basis_state(n: int, index: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1
    return psi


def run(c: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Apply ``c`` to ``state`` (default ``|0...0>``) and return the new statevector."""
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds simulator cap of {MAX_QUBITS}")
    if state is None:
        state = zero_state(n)
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**n,):
        raise ValueError(f"state has shape {state.shape}, expected ({2**n},)")
    return _evolve(c, state.reshape(-1, 1))[:, 0]


def unitary(c: Circuit) -> np.ndarray:
    """Full operator; column ``j`` is the output for basis input ``j``."""
    return _evolve(c, np.eye(2**c.num_qubits, dtype=complex))


def permutation_indices(perm: Sequence[int], n: int) -> np.ndarray:
    """For each logical index, the physical index holding it.

    ``perm[l]`` is the physical qubit where logical qubit ``l`` ends up.
    """
    idx = np.arange(2**n)
    phys = np.zeros(2**n, dtype=np.int64)
    for logical, physical in enumerate(perm):
        phys |= ((idx >> logical) & 1) << physical
    return phys


def random_product_states(n: int, count: int = SAMPLED_STATES, seed: int = 0) -> np.ndarray:
    """(2**n, count) array of Haar-random single-qubit product states."""
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(count):
        psi = np.ones(1, dtype=complex)
        for _q in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            v /= np.linalg.norm(v)
            # kron(new, psi) puts the new qubit in the more significant position
            psi = np.kron(v, psi)
        cols.append(psi)
    return np.stack(cols, axis=1)


def _strip_phase(a: np.ndarray, b: np.ndarray) -> complex:
    mask = (np.abs(a) > PHASE_EPS) & (np.abs(b) > PHASE_EPS)
    hits = np.flatnonzero(mask.ravel(order="F"))
    if hits.size == 0:
        return 1.0
    i = hits[0]
    x, y = a.ravel(order="F")[i], b.ravel(order="F")[i]
    ratio = x / y
    return ratio / abs(ratio)


def equivalent(
    c1: Circuit,
    c2: Circuit,
    perm: Sequence[int] | None = None,
    tol: float = 1e-9,
    *,
    initial: Sequence[int] | None = None,
    seed: int = 0,
) -> bool:
    """Is ``c2`` equal to ``c1`` up to global phase and a final qubit permutation?

    ``perm[l]`` is the physical qubit holding logical qubit ``l`` at the end of
    ``c2``; ``initial`` is the same map at the start (identity by default).
    Up to 6 qubits the full operators are compared entrywise; above that,
    20 seeded random product states must each reach fidelity > 1 - tol.
    """
    if c1.num_qubits != c2.num_qubits:
        raise ValueError(f"qubit-count mismatch: {c1.num_qubits} vs {c2.num_qubits}")
    n = c1.num_qubits
    ident = list(range(n))
    out_idx = permutation_indices(ident if perm is None else perm, n)
    in_idx = permutation_indices(ident if initial is None else initial, n)

    if n <= EXHAUSTIVE_MAX:
        inputs = np.eye(2**n, dtype=complex)
    else:
        inputs = random_product_states(n, SAMPLED_STATES, seed)
    # Logical input state |x> is fed to c2 as the physical state holding x.
    phys_inputs = np.zeros_like(inputs)
    phys_inputs[in_idx] = inputs
    out1 = _evolve(c1, inputs)
    out2 = _evolve(c2, phys_inputs)[out_idx]

    if n <= EXHAUSTIVE_MAX:
        phase = _strip_phase(out1, out2)
        return float(np.max(np.abs(out1 - phase * out2))) < tol
    fid = np.abs(np.sum(out1.conj() * out2, axis=0)) ** 2
    return bool(np.all(fid > 1 - tol))
