"""
The benchmark corpus
====================

Six small circuits, each built deterministically. This walks through them
and checks a few of their defining behaviours with the statevector
simulator.
"""

import numpy as np

from microbench import corpus, sim
from microbench.ir import GateKind, depth, two_qubit_count

# %%
# Sizes at a glance. The random Clifford circuit is the only seeded one.
for c in corpus.corpus_all(seed=42):
    print(f"{c.name:10s} qubits={c.num_qubits}  gates={len(c):3d}  depth={depth(c):3d}  2q={two_qubit_count(c)}")

# %%
# One Grover iteration over 8 items lifts the marked state |111> from 1/8 to 25/32.
probs = np.abs(sim.run(corpus.build_grover3())) ** 2
print("P(|111>) after one iteration:", round(probs[0b111], 6), "expected", 25 / 32)

# %%
# The adder is a reversible full adder: q0=carry-in, q1=a, q2=b, q3=carry-out.
adder = corpus.build_adder()
for a in (0, 1):
    for b in (0, 1):
        out = sim.run(adder, sim.basis_state(4, a << 1 | b << 2))
        j = int(np.argmax(np.abs(out)))
        print(f"{a} + {b} = {(j >> 3) & 1}{(j >> 2) & 1}")

# %%
# Modular multiplication: control on q0, data little-endian in q1..q4.
modmul = corpus.build_modmul()
for x in range(5):
    out = sim.run(modmul, sim.basis_state(7, 1 | x << 1))
    j = int(np.argmax(np.abs(out)))
    print(f"2 * {x} mod 5 = {(j >> 1) & 0xF}  (ancillas: {j >> 5})")

# %%
# Same seed, same circuit; the layered depth is always 15.
a = corpus.build_random_clifford(8, 15, seed=7)
b = corpus.build_random_clifford(8, 15, seed=7)
print("identical:", a == b, " depth:", depth(a), " kinds:", sorted(k.name for k in a.kinds()))
assert a.kinds() <= {GateKind.H, GateKind.S, GateKind.X, GateKind.CX, GateKind.CZ, GateKind.SWAP}
