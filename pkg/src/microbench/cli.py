"""
``microbench`` command: run the (circuit x backend) grid and write
results.csv, summary.json and depth.svg into the output folder.

Backends are built-in pipeline levels (``L0``, ``L1``, ``L2``) or external
compilers given as ``external:<command>``. An external compiler reads one
OpenQASM 2.0 document on stdin and writes one on stdout; a nonzero exit or a
timeout is recorded as a failed row rather than aborting the run.

Exit status: 0 on full success, 2 when a backend was skipped or an external
compiler failed or did not verify, 1 on a hard error.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import enum
import logging
import os
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__, qasm, sim
from .corpus import CORPUS_NAMES, DEFAULT_SEED, corpus_all
from .ir import Circuit, CouplingMap, depth, two_qubit_count
from .metrics import DEFAULT_REPS, MeasurementError, NullProbe, measure, pin_to_one_cpu
from .report import BenchmarkRecord, render_depth_svg, write_csv, write_summary
from .transpile import PipelineLevel, run_pipeline

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("microbench")

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2
EXTERNAL_PREFIX = "external:"
EXTERNAL_TIMEOUT_S = 60.0
VERIFY_TOL = 1e-9
COUPLINGS = ("linear", "ring", "grid")


class Availability(enum.Enum):
    AVAILABLE = "available"
    MISSING = "missing"
    FAILING = "available-but-failing"


class ExternalBackendError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExternalBackend:
    name: str
    argv: tuple[str, ...]

    @classmethod
    def from_spec(cls, spec: str) -> ExternalBackend:
        argv = tuple(shlex.split(spec[len(EXTERNAL_PREFIX):]))
        if not argv:
            raise ValueError(f"empty external command in {spec!r}")
        return cls(spec, argv)

    def resolve(self) -> str | None:
        exe = self.argv[0]
        if os.sep in exe:
            return exe if os.path.isfile(exe) and os.access(exe, os.X_OK) else None
        return shutil.which(exe)

    def compile(self, circuit: Circuit, timeout: float | None = None) -> Circuit:
        timeout = EXTERNAL_TIMEOUT_S if timeout is None else timeout
        try:
            proc = subprocess.run(
                self.argv, input=qasm.emit(circuit), capture_output=True, text=True, timeout=timeout,
            )
        except subprocess.TimeoutExpired as exc:
            raise ExternalBackendError(f"{self.name}: timed out after {timeout:g} s") from exc
        except OSError as exc:
            raise ExternalBackendError(f"{self.name}: {exc}") from exc
        if proc.returncode != 0:
            tail = proc.stderr.strip().splitlines()[-1:] or [""]
            raise ExternalBackendError(f"{self.name}: exit status {proc.returncode} {tail[0]}".rstrip())
        return qasm.parse(proc.stdout, name=circuit.name)


def is_external(spec: str) -> bool:
    return spec.startswith(EXTERNAL_PREFIX)


def detect(spec: str, probe: bool = False) -> Availability:
    """Built-in levels are always available; external commands must resolve.

    With ``probe=True`` a resolvable command is also fed a 1-qubit empty
    document and reported as failing if it exits nonzero.
    """
    if not is_external(spec):
        PipelineLevel(spec)
        return Availability.AVAILABLE
    backend = ExternalBackend.from_spec(spec)
    if backend.resolve() is None:
        return Availability.MISSING
    if probe:
        try:
            backend.compile(Circuit(1, (), "probe"), timeout=10)
        except (ExternalBackendError, qasm.QasmParseError):
            return Availability.FAILING
    return Availability.AVAILABLE


@dataclass
class RunConfig:
    out_dir: Path = Path("results")
    backends: list[str] = field(default_factory=lambda: ["L0", "L1", "L2"])
    circuits: list[str] | str = "all"
    reps: int = DEFAULT_REPS
    seed: int = DEFAULT_SEED
    coupling: str = "linear"
    verify: bool = True
    pin_cpu: bool = False

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not self.backends:
            raise ValueError("at least one backend is required")
        if self.coupling not in COUPLINGS:
            raise ValueError(f"coupling must be one of {COUPLINGS}")
        for spec in self.backends:
            if not is_external(spec):
                try:
                    PipelineLevel(spec)
                except ValueError:
                    raise ValueError(f"unknown backend {spec!r}; use L0/L1/L2 or external:<cmd>") from None
        if len(set(self.backends)) != len(self.backends):
            raise ValueError("duplicate backend")
        if self.circuits != "all":
            unknown = [c for c in self.circuits if c not in CORPUS_NAMES]
            if unknown:
                raise ValueError(f"unknown circuits {unknown}; choose from {list(CORPUS_NAMES)}")

    def selected_circuits(self) -> list[Circuit]:
        circuits = corpus_all(self.seed)
        if self.circuits == "all":
            return circuits
        wanted = set(self.circuits)
        return [c for c in circuits if c.name in wanted]


def _verify_external(original: Circuit, compiled: Circuit) -> bool:
    if compiled.num_qubits != original.num_qubits:
        return False
    try:
        return sim.equivalent(original, compiled, tol=VERIFY_TOL)
    except ValueError:
        return False


def _bench_builtin(circuit: Circuit, level: str, coupling: CouplingMap, config: RunConfig) -> tuple[BenchmarkRecord, bool]:
    m = measure(lambda: run_pipeline(circuit, level, coupling), config.reps)
    result = m.result
    verified = None
    if config.verify:
        verified = sim.equivalent(circuit, result.circuit, result.final_layout, VERIFY_TOL)
        if not verified:
            log.error("built-in %s produced a non-equivalent circuit for %s", level, circuit.name)
    out = result.circuit
    rec = BenchmarkRecord(
        circuit.name, level, circuit.num_qubits, depth(circuit), depth(out),
        two_qubit_count(circuit), two_qubit_count(out), len(out),
        m.median_ms, m.peak_mem_bytes, config.seed, verified,
    )
    return rec, verified is not False


def _bench_external(circuit: Circuit, backend: ExternalBackend, config: RunConfig) -> tuple[BenchmarkRecord, bool]:
    base = dict(
        circuit_name=circuit.name, backend=backend.name, qubits=circuit.num_qubits,
        depth_in=depth(circuit), twoq_in=two_qubit_count(circuit), seed=config.seed,
    )
    try:
        # the child process is invisible to the in-process memory probe
        m = measure(lambda: backend.compile(circuit), config.reps, probe=NullProbe())
    except MeasurementError as exc:
        log.warning("%s failed on %s: %s", backend.name, circuit.name, exc.__cause__ or exc)
        rec = BenchmarkRecord(
            **base, depth_out=None, twoq_out=None, gates_out=None,
            time_ms_median=None, peak_mem_bytes=None, verified=None, failed=True,
        )
        return rec, False
    out = m.result
    verified = None
    if config.verify:
        verified = _verify_external(circuit, out)
        if not verified:
            log.warning("%s output for %s did not verify", backend.name, circuit.name)
    rec = BenchmarkRecord(
        **base, depth_out=depth(out), twoq_out=two_qubit_count(out), gates_out=len(out),
        time_ms_median=m.median_ms, peak_mem_bytes=None, verified=verified,
    )
    return rec, verified is not False


def run(config: RunConfig) -> int:
    try:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        probe_file = config.out_dir / ".microbench-write-test"
        probe_file.write_text("")
        probe_file.unlink()
    except OSError as exc:
        log.error("cannot write to %s: %s", config.out_dir, exc)
        return EXIT_ERROR
    if config.pin_cpu and not pin_to_one_cpu():
        log.warning("CPU pinning not supported on this platform")

    status = EXIT_OK
    active: list[str] = []
    skipped: list[str] = []
    for spec in config.backends:
        if detect(spec) is Availability.MISSING:
            log.warning("backend %s not found; skipping", spec)
            skipped.append(spec)
            status = EXIT_PARTIAL
        else:
            active.append(spec)

    circuits = config.selected_circuits()
    records: list[BenchmarkRecord] = []
    builtin_ok = True
    for circuit in circuits:
        coupling = CouplingMap.named(config.coupling, circuit.num_qubits)
        for spec in active:
            log.info("%s / %s", circuit.name, spec)
            if is_external(spec):
                rec, ok = _bench_external(circuit, ExternalBackend.from_spec(spec), config)
                if not ok:
                    status = EXIT_PARTIAL
            else:
                rec, ok = _bench_builtin(circuit, spec, coupling, config)
                builtin_ok &= ok
            records.append(rec)

    if not records:
        log.error("no backend available; nothing to report")
        return EXIT_ERROR
    metadata = {
        "tool_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "seed": config.seed,
        "reps": config.reps,
        "coupling": config.coupling,
        "backends": active,
        "skipped_backends": skipped,
        "circuits": [c.name for c in circuits],
        "verify": config.verify,
    }
    try:
        write_csv(records, config.out_dir / "results.csv")
        write_summary(records, config.out_dir / "summary.json", metadata)
        render_depth_svg(records, config.out_dir / "depth.svg")
    except OSError as exc:
        log.error("failed writing results: %s", exc)
        return EXIT_ERROR
    if not builtin_ok:
        return EXIT_ERROR
    return status


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="microbench", description=__doc__.split("\n\n")[0].strip())
    # None defaults so that config-file values survive unless a flag is given
    p.add_argument("--out", dest="out_dir", default=None, help="results folder (default: results)")
    p.add_argument("--backends", default=None, help="comma list: L0,L1,L2 or external:<cmd>")
    p.add_argument("--circuits", default=None, help=f"comma list of {','.join(CORPUS_NAMES)} or 'all'")
    p.add_argument("--reps", type=int, default=None, help=f"repetitions per pair (default {DEFAULT_REPS})")
    p.add_argument("--seed", type=int, default=None, help=f"corpus seed (default {DEFAULT_SEED})")
    p.add_argument("--coupling", choices=COUPLINGS, default=None)
    p.add_argument("--no-verify", dest="verify", action="store_false", default=None)
    p.add_argument("--pin-cpu", dest="pin_cpu", action="store_true", default=None)
    p.add_argument("--config", type=Path, default=None, help="TOML file with the same keys")
    p.add_argument("-q", "--quiet", action="store_true")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


_CONFIG_KEYS = {"out_dir", "out", "backends", "circuits", "reps", "seed", "coupling", "verify", "pin_cpu"}


def _normalize(values: dict) -> dict:
    values = dict(values)
    if "out" in values:
        values["out_dir"] = values.pop("out")
    for key in ("backends", "circuits"):
        if isinstance(values.get(key), str):
            values[key] = "all" if values[key] == "all" else _split_list(values[key])
    return values


def load_config(path: Path) -> dict:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    data = data.get("microbench", data)
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    return _normalize(data)


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values: dict = {}
    if args.config is not None:
        values.update(load_config(args.config))
    flags = {k: v for k, v in vars(args).items() if k in _CONFIG_KEYS and v is not None}
    values.update(_normalize(flags))
    return RunConfig(**values)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(argv)
    except (ValueError, OSError, tomllib.TOMLDecodeError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
