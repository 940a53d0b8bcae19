"""Micro-benchmark harness for quantum circuit transpilers.

Builds a fixed six-circuit corpus, compiles it through built-in pipelines
(and optional external compilers speaking OpenQASM on stdio), measures
depth, two-qubit count, compile time and peak memory, and checks every
result against a statevector oracle.
"""

__version__ = "0.1.0"

from .corpus import corpus_all
from .ir import Circuit, CouplingMap, Gate, GateKind, depth, two_qubit_count, validate
from .metrics import measure, median
from .transpile import PipelineLevel, TranspileResult, run_pipeline

__all__ = [
    "Circuit",
    "CouplingMap",
    "Gate",
    "GateKind",
    "PipelineLevel",
    "TranspileResult",
    "corpus_all",
    "depth",
    "measure",
    "median",
    "run_pipeline",
    "two_qubit_count",
    "validate",
]
