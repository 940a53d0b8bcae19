"""
Comparing the built-in pipelines
================================

L0 only lowers to {CX, H, RZ} and routes; L1 adds peephole cleanup around
routing; L2 also cancels CX pairs and merges RZ rotations across gates that
commute with them. Every result is checked against the original circuit.
"""

from microbench import corpus, sim
from microbench.ir import CouplingMap, depth, two_qubit_count
from microbench.transpile import PipelineLevel, run_pipeline

circuit = corpus.build_adder()

# %%
# The same circuit on three topologies. Routing cost depends heavily on connectivity.
for kind in ("linear", "ring", "grid"):
    cmap = CouplingMap.named(kind, circuit.num_qubits)
    for level in PipelineLevel:
        res = run_pipeline(circuit, level, cmap)
        ok = sim.equivalent(circuit, res.circuit, res.final_layout)
        print(
            f"{kind:6s} {level.value}: depth={depth(res.circuit):3d} 2q={two_qubit_count(res.circuit):3d} "
            f"gates={len(res.circuit):3d} layout={res.final_layout} verified={ok}"
        )

# %%
# Per-pass bookkeeping: net gate-count change for each stage.
res = run_pipeline(corpus.build_qft(5), "L2")
print(res.stats)

# %%
# A worked routing example: CX(0, 2) on the chain 0-1-2 needs one SWAP,
# and the permutation it leaves behind is reported rather than undone.
from microbench.ir import Circuit, cx
from microbench.transpile import route

routed = route(Circuit(3, [cx(0, 2)]), CouplingMap.linear(3))
print(routed.circuit.gates, routed.final_layout)
