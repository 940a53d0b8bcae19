"""
The full benchmark run
======================

Equivalent to ``microbench --out results``: six circuits, three pipeline
levels, five timed repetitions each, median reported, every output verified.
"""

import json
import tempfile
from pathlib import Path

from microbench.cli import RunConfig, run

out = Path(tempfile.mkdtemp(prefix="microbench-")) / "results"
code = run(RunConfig(out_dir=out))
print("exit code:", code, "->", sorted(p.name for p in out.iterdir()))

# %%
# Aggregates per backend, the same four columns as a typical compiler
# comparison table: mean depth, mean 2Q gates, mean time, mean memory.
summary = json.loads((out / "summary.json").read_text())
print(f"{'backend':8s} {'depth':>8s} {'2q':>8s} {'ms':>8s} {'KiB':>8s}")
for name, s in summary["backends"].items():
    print(f"{name:8s} {s['mean_depth']:8.1f} {s['mean_twoq']:8.1f} {s['mean_time_ms']:8.2f} {s['mean_mem'] / 1024:8.1f}")

# %%
# depth.svg is a grouped bar chart, one bar per (circuit, backend).
print(out / "depth.svg")
