"""Portable instrumentation: element touches per pass, comparisons, phase timers.

A touch is one algorithm-level visit of a distinct object during a pass
(distribution sweep, compaction, or base-case sweep).  When a segment is
split across two child slabs only one copy counts (the left one for even
ids, the right one for odd ids); the other is tallied in ``copies``.
Sorting is never counted.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K


@dataclass
class TouchCounter:
    touches: int = 0
    per_level: dict[int, int] = field(default_factory=dict)
    comparisons: int = 0
    copies: int = 0
    regrowths: int = 0
    max_active: int = 0

    def record(self, level: int, count: int) -> None:
        if count < 0:
            raise ValueError(f"touch count must be >= 0, got {count}")
        self.touches += count
        self.per_level[level] = self.per_level.get(level, 0) + count

    def add_stats(self, level: int, stats: np.ndarray) -> None:
        self.record(level, int(stats[K.STAT_TOUCHES]))
        self.comparisons += int(stats[K.STAT_COMPARISONS])
        self.copies += int(stats[K.STAT_COPIES])
        self.regrowths += int(stats[K.STAT_REGROWTHS])
        self.max_active = max(self.max_active, int(stats[K.STAT_MAX_ACTIVE]))

    def merge(self, other: TouchCounter) -> TouchCounter:
        out = TouchCounter(
            self.touches + other.touches,
            dict(self.per_level),
            self.comparisons + other.comparisons,
            self.copies + other.copies,
            self.regrowths + other.regrowths,
            max(self.max_active, other.max_active),
        )
        for lvl, c in other.per_level.items():
            out.per_level[lvl] = out.per_level.get(lvl, 0) + c
        return out

    def reset(self) -> None:
        self.touches = self.comparisons = self.copies = self.regrowths = self.max_active = 0
        self.per_level.clear()


def record_touch(counter: TouchCounter, level: int, count: int) -> None:
    counter.record(level, count)


class StatTally:
    """Kernel stat arrays summed per level; owned by one task, merged afterwards."""

    def __init__(self) -> None:
        self.levels: dict[int, np.ndarray] = {}

    def add(self, level: int, stats: np.ndarray) -> None:
        cur = self.levels.get(level)
        if cur is None:
            self.levels[level] = stats.copy()
            return
        active = max(cur[K.STAT_MAX_ACTIVE], stats[K.STAT_MAX_ACTIVE])
        cur += stats
        cur[K.STAT_MAX_ACTIVE] = active

    def touches(self) -> int:
        return int(sum(s[K.STAT_TOUCHES] for s in self.levels.values()))

    def flush(self, metrics: Metrics | None, worker: int) -> None:
        if metrics is None:
            return
        for level in sorted(self.levels):
            metrics.record(worker, level, self.levels[level])


@dataclass(frozen=True)
class MetricsReport:
    touches_total: int
    per_level: tuple[tuple[int, int], ...]
    per_worker: tuple[int, ...]
    comparisons: int
    copies: int
    regrowths: int
    max_active: int
    phases: dict[str, float]

    @property
    def max_worker_touches(self) -> int:
        return max(self.per_worker, default=0)

    def per_level_str(self) -> str:
        return ";".join(f"{lvl}:{c}" for lvl, c in self.per_level)


class Metrics:
    """Per-worker counters plus named wall-clock phases for one run.

    With ``enabled=False`` kernels skip counting and nothing is recorded.
    """

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.workers: dict[int, TouchCounter] = {}
        self.phases: dict[str, float] = {}

    def worker(self, j: int) -> TouchCounter:
        # called before workers start, so no two threads create the same entry
        if j not in self.workers:
            self.workers[j] = TouchCounter()
        return self.workers[j]

    def prepare_workers(self, P: int) -> list[TouchCounter]:
        return [self.worker(j) for j in range(P)]

    def record(self, worker: int, level: int, stats: np.ndarray) -> None:
        if self.enabled:
            self.worker(worker).add_stats(level, stats)

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = self.phases.get(name, 0.0) + time.perf_counter() - t0

    def total(self) -> TouchCounter:
        out = TouchCounter()
        for j in sorted(self.workers):
            out = out.merge(self.workers[j])
        return out

    def reset(self) -> None:
        self.workers.clear()
        self.phases.clear()


def snapshot(metrics: Metrics) -> MetricsReport:
    tot = metrics.total()
    return MetricsReport(
        touches_total=tot.touches,
        per_level=tuple(sorted(tot.per_level.items())),
        per_worker=tuple(metrics.workers[j].touches for j in sorted(metrics.workers)),
        comparisons=tot.comparisons,
        copies=tot.copies,
        regrowths=tot.regrowths,
        max_active=tot.max_active,
        phases=dict(metrics.phases),
    )
