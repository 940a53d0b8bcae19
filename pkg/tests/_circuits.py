"""Seeded random circuits shared by the property tests."""
import numpy as np

from microbench.ir import Circuit, Gate, GateKind

ALL_KINDS = tuple(GateKind)
BASIS_KINDS = (GateKind.H, GateKind.RZ, GateKind.CX)


def random_circuit(seed, n=None, m=None, kinds=ALL_KINDS, name="rand"):
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(3, 6))
    if m is None:
        m = int(rng.integers(0, 30))
    kinds = [k for k in kinds if k.arity <= n]
    gates = []
    for _ in range(m):
        k = kinds[rng.integers(len(kinds))]
        qubits = tuple(int(q) for q in rng.choice(n, size=k.arity, replace=False))
        param = float(rng.uniform(-2 * np.pi, 2 * np.pi)) if k.has_param else None
        gates.append(Gate(k, qubits, param))
    return Circuit(n, gates, name)


def random_basis_circuit(seed, n=None, m=None):
    """Basis-only circuit with small angle alphabet so rewrite rules fire often."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(2, 5))
    if m is None:
        m = int(rng.integers(0, 40))
    angles = (np.pi / 4, -np.pi / 4, np.pi / 2, 0.3, -0.3, 0.0)
    gates = []
    for _ in range(m):
        k = BASIS_KINDS[rng.integers(3)]
        qubits = tuple(int(q) for q in rng.choice(n, size=k.arity, replace=False))
        param = float(angles[rng.integers(len(angles))]) if k.has_param else None
        gates.append(Gate(k, qubits, param))
    return Circuit(n, gates, "rand-basis")


def explicit_unitary(c):
    """Operator of ``c`` built from Kronecker-embedded gate matrices.

    Independent of the simulator's tensor contraction: every gate is
    expanded to a dense 2**n matrix by looping over basis indices.
    """
    from microbench.sim import gate_matrix

    n = c.num_qubits
    dim = 2**n
    u = np.eye(dim, dtype=complex)
    for g in c.gates:
        m = gate_matrix(g)
        k = len(g.qubits)
        full = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            local_in = 0
            for pos, q in enumerate(g.qubits):
                local_in |= ((col >> q) & 1) << (k - 1 - pos)
            for local_out in range(2**k):
                amp = m[local_out, local_in]
                if amp == 0:
                    continue
                row = col
                for pos, q in enumerate(g.qubits):
                    bit = (local_out >> (k - 1 - pos)) & 1
                    row = (row & ~(1 << q)) | (bit << q)
                full[row, col] += amp
        u = full @ u
    return u
