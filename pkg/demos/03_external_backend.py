"""
Plugging in an external compiler
================================

Any executable that reads OpenQASM 2.0 on stdin and writes OpenQASM 2.0 on
stdout can be benchmarked next to the built-in pipelines. Here a two-line
shell script plays the part of a compiler that changes nothing.
"""

import stat
import tempfile
from pathlib import Path

from microbench import qasm
from microbench.cli import RunConfig, detect, run
from microbench.corpus import build_grover3

# %%
# The wire format is a small QASM subset.
print(qasm.emit(build_grover3()))

# %%
# A stand-in compiler: echo the circuit back.
work = Path(tempfile.mkdtemp(prefix="microbench-demo-"))
script = work / "identity.sh"
script.write_text("#!/bin/sh\ncat\n")
script.chmod(script.stat().st_mode | stat.S_IXUSR)

spec = f"external:{script}"
print(spec, "->", detect(spec).value)
print("external:nosuchtool ->", detect("external:nosuchtool").value)

# %%
# Run it alongside L1. Missing tools are skipped and the exit code becomes 2.
code = run(RunConfig(out_dir=work / "results", reps=1, backends=["L1", spec, "external:nosuchtool"]))
print("exit code:", code)
print((work / "results" / "results.csv").read_text())
