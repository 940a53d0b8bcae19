"""
Result artifacts: per-run CSV, per-backend summary JSON, grouped-bar SVG of
output depth. CSV and SVG are byte-deterministic for identical records;
only the JSON carries a timestamp.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

CSV_COLUMNS = (
    "circuit", "backend", "qubits", "depth_in", "depth_out", "twoq_in", "twoq_out",
    "gates_out", "time_ms_median", "peak_mem_bytes", "seed",
)
# Trailing protocol columns: verification outcome and per-pair failure flag.
EXTRA_COLUMNS = ("verified", "failed")


@dataclass(frozen=True)
class BenchmarkRecord:
    circuit_name: str
    backend: str
    qubits: int
    depth_in: int
    depth_out: int | None
    twoq_in: int
    twoq_out: int | None
    gates_out: int | None
    time_ms_median: float | None
    peak_mem_bytes: int | None
    seed: int
    verified: bool | None = None
    failed: bool = False

    def __post_init__(self):
        if not self.circuit_name or not self.backend:
            raise ValueError("circuit_name and backend must be nonempty")
        if self.depth_out is not None and self.depth_out < 0:
            raise ValueError("depth_out must be non-negative")

    @property
    def key(self) -> tuple[str, str]:
        return (self.circuit_name, self.backend)


def _check(records: Sequence[BenchmarkRecord]) -> list[BenchmarkRecord]:
    if not records:
        raise ValueError("no records to write")
    seen = set()
    for r in records:
        if r.key in seen:
            raise ValueError(f"duplicate record for circuit={r.key[0]!r} backend={r.key[1]!r}")
        seen.add(r.key)
    return sorted(records, key=lambda r: r.key)


def _fmt_real(x: float | None) -> str:
    return "" if x is None else f"{x:.3f}"


def _fmt_opt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def write_csv(records: Sequence[BenchmarkRecord], path) -> Path:
    rows = _check(records)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS + EXTRA_COLUMNS)
        for r in rows:
            w.writerow([
                r.circuit_name, r.backend, r.qubits, r.depth_in, _fmt_opt(r.depth_out),
                r.twoq_in, _fmt_opt(r.twoq_out), _fmt_opt(r.gates_out),
                _fmt_real(r.time_ms_median), _fmt_opt(r.peak_mem_bytes), r.seed,
                _fmt_opt(r.verified), _fmt_opt(r.failed),
            ])
    return path


def _opt_int(s: str) -> int | None:
    return None if s == "" else int(s)


def _opt_bool(s: str) -> bool | None:
    return None if s == "" else s == "true"


def read_csv(path) -> list[BenchmarkRecord]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [
            BenchmarkRecord(
                circuit_name=row["circuit"],
                backend=row["backend"],
                qubits=int(row["qubits"]),
                depth_in=int(row["depth_in"]),
                depth_out=_opt_int(row["depth_out"]),
                twoq_in=int(row["twoq_in"]),
                twoq_out=_opt_int(row["twoq_out"]),
                gates_out=_opt_int(row["gates_out"]),
                time_ms_median=None if row["time_ms_median"] == "" else float(row["time_ms_median"]),
                peak_mem_bytes=_opt_int(row["peak_mem_bytes"]),
                seed=int(row["seed"]),
                verified=_opt_bool(row.get("verified", "")),
                failed=bool(_opt_bool(row.get("failed", ""))),
            )
            for row in reader
        ]


def _mean(xs: list[float]) -> float | None:
    return sum(xs) / len(xs) if xs else None


def summarize(records: Iterable[BenchmarkRecord]) -> dict[str, dict]:
    """Per-backend means over successful records.

    Times are averaged at the CSV's 3-decimal precision so the summary can be
    recomputed from the CSV alone. A backend whose records all lack memory
    gets ``mean_mem = None``.
    """
    by_backend: dict[str, list[BenchmarkRecord]] = {}
    for r in records:
        by_backend.setdefault(r.backend, []).append(r)
    out = {}
    for backend in sorted(by_backend):
        ok = [r for r in by_backend[backend] if not r.failed]
        mems = [r.peak_mem_bytes for r in ok if r.peak_mem_bytes is not None]
        out[backend] = {
            "mean_depth": _mean([r.depth_out for r in ok]),
            "mean_twoq": _mean([r.twoq_out for r in ok]),
            "mean_time_ms": _mean([float(_fmt_real(r.time_ms_median)) for r in ok]),
            "mean_mem": _mean(mems),
            "circuit_count": len(ok),
            "failed_count": len(by_backend[backend]) - len(ok),
        }
    return out


def write_summary(records: Sequence[BenchmarkRecord], path, metadata: dict | None = None) -> Path:
    _check(records)
    doc = {"backends": summarize(records), "metadata": dict(metadata or {})}
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


_PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c")


def render_depth_svg(records: Sequence[BenchmarkRecord], path=None) -> str:
    """Grouped bar chart of ``depth_out``; one ``rect.bar`` per record.

    Failed records are drawn as zero-height bars with class ``bar failed``.
    Returns the SVG text and writes it to ``path`` when given.
    """
    rows = _check(records)
    circuits = sorted({r.circuit_name for r in rows})
    backends = sorted({r.backend for r in rows})
    by_key = {r.key: r for r in rows}
    peak = max([r.depth_out or 0 for r in rows] + [1])

    bar_w, gap, left, top, plot_h = 14, 18, 60, 30, 240
    group_w = bar_w * len(backends) + gap
    width = left + group_w * len(circuits) + 20
    legend_y = top + plot_h + 60
    height = legend_y + 18 * len(backends) + 10
    base = top + plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<text x="{width / 2:.1f}" y="16" text-anchor="middle" font-size="13">Post-routing depth (lower is better)</text>',
        f'<line x1="{left}" y1="{base}" x2="{width - 10}" y2="{base}" stroke="#000"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="#000"/>',
    ]
    for tick in range(5):
        value = peak * tick / 4
        y = base - plot_h * tick / 4
        out.append(f'<text x="{left - 6}" y="{y + 4:.1f}" text-anchor="end">{value:.0f}</text>')
        out.append(f'<line x1="{left - 3}" y1="{y:.1f}" x2="{left}" y2="{y:.1f}" stroke="#000"/>')
    for ci, circuit in enumerate(circuits):
        x0 = left + gap / 2 + ci * group_w
        for bi, backend in enumerate(backends):
            r = by_key.get((circuit, backend))
            if r is None:
                continue
            d = r.depth_out or 0
            bh = plot_h * d / peak
            cls = "bar failed" if r.failed else "bar"
            out.append(
                f'<rect class="{cls}" x="{x0 + bi * bar_w:.1f}" y="{base - bh:.1f}" width="{bar_w}" '
                f'height="{bh:.1f}" fill="{_PALETTE[bi % len(_PALETTE)]}">'
                f"<title>{escape(circuit)} / {escape(backend)}: {'' if r.depth_out is None else d}</title></rect>"
            )
        cx_ = x0 + bar_w * len(backends) / 2
        out.append(f'<text x="{cx_:.1f}" y="{base + 16}" text-anchor="middle">{escape(circuit)}</text>')
    for bi, backend in enumerate(backends):
        y = legend_y + 18 * bi
        out.append(f'<rect class="legend-swatch" x="{left}" y="{y}" width="12" height="12" fill="{_PALETTE[bi % len(_PALETTE)]}"/>')
        out.append(f'<text x="{left + 18}" y="{y + 10}">{escape(backend)}</text>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg, encoding="utf-8")
    return svg
