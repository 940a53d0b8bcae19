"""
Timing and memory measurement: run a piece of work ``reps`` times on the
calling thread, report the median wall-clock time and the peak traced
allocation across runs.
"""
from __future__ import annotations

import os
import statistics
import time
import tracemalloc
from dataclasses import dataclass
from typing import Any, Callable, Sequence

DEFAULT_REPS = 5


def median(xs: Sequence[float]) -> float:
    """Median; even-length input gives the midpoint of the middle pair."""
    if len(xs) == 0:
        raise ValueError("median of an empty sequence")
    return float(statistics.median(xs))


class MemoryProbe:
    """Peak extra bytes allocated between ``start`` and ``stop``."""

    available = True

    def start(self) -> None:
        raise NotImplementedError

    def stop(self) -> int | None:
        raise NotImplementedError


class TracemallocProbe(MemoryProbe):
    """Python-heap peak via :mod:`tracemalloc`. Native allocations are invisible."""

    def __init__(self):
        self._owns = False
        self._base = 0

    def start(self) -> None:
        if not tracemalloc.is_tracing():
            tracemalloc.start()
            self._owns = True
        tracemalloc.reset_peak()
        self._base = tracemalloc.get_traced_memory()[0]

    def stop(self) -> int:
        peak = tracemalloc.get_traced_memory()[1]
        if self._owns:
            tracemalloc.stop()
            self._owns = False
        return max(0, peak - self._base)


class NullProbe(MemoryProbe):
    """No instrumentation: memory is reported as absent, never as zero."""

    available = False

    def start(self) -> None:
        pass

    def stop(self) -> None:
        return None


@dataclass(frozen=True)
class Measurement:
    samples_ms: tuple[float, ...]
    median_ms: float
    peak_mem_bytes: int | None
    result: Any = None

    @property
    def spread(self) -> float:
        """(max - min) / median of the samples; 0 when the median is 0."""
        if self.median_ms == 0:
            return 0.0
        return (max(self.samples_ms) - min(self.samples_ms)) / self.median_ms


class MeasurementError(RuntimeError):
    def __init__(self, message: str, samples_ms: Sequence[float]):
        super().__init__(message)
        self.samples_ms = tuple(samples_ms)


def measure(work: Callable[[], Any], reps: int = DEFAULT_REPS, probe: MemoryProbe | None = None) -> Measurement:
    """Run ``work`` ``reps`` times sequentially; keep the last return value.

    No warm-up run is discarded. If ``work`` raises, :class:`MeasurementError`
    carries the samples collected so far and chains the original exception.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    probe = probe if probe is not None else TracemallocProbe()
    samples: list[float] = []
    peak: int | None = None
    result = None
    for i in range(reps):
        probe.start()
        t0 = time.perf_counter()
        try:
            result = work()
        except Exception as exc:
            probe.stop()
            raise MeasurementError(f"work failed on rep {i + 1}/{reps}: {exc}", samples) from exc
        elapsed = (time.perf_counter() - t0) * 1000.0
        used = probe.stop()
        samples.append(elapsed)
        if used is not None:
            peak = used if peak is None else max(peak, used)
    return Measurement(tuple(samples), median(samples), peak, result)


def pin_to_one_cpu() -> bool:
    """Restrict this process to a single CPU where the platform allows it."""
    if not hasattr(os, "sched_setaffinity"):
        return False
    cpus = sorted(os.sched_getaffinity(0))
    os.sched_setaffinity(0, {cpus[0]})
    return True
