"""Input generators: four segment-length families plus uniform query points.

Everything is drawn from one ``numpy.random.default_rng(seed)`` stream (PCG64)
in a fixed order: segment y, then the two per-segment x draws (both x
coordinates for Random; length then left-endpoint offset otherwise), then
query x, then query y.  Each draw is a vector of length n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import make_queries, make_segments


class Kind(str, Enum):
    RANDOM = "random"
    SHORT = "short"
    MEDIUM = "medium"
    LONG = "long"


@dataclass(frozen=True)
class GenSpec:
    kind: Kind
    n_segments: int
    n_queries: int
    grid: float = 1e6
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.grid > 0:
            raise ValueError("grid must be > 0")
        if self.n_segments < 0 or self.n_queries < 0:
            raise ValueError("counts must be >= 0")


def length_range(spec: GenSpec) -> tuple[float, float] | None:
    """(min, max) segment length for the length-based kinds; None for Random."""
    g, n = spec.grid, spec.n_segments
    if spec.kind is Kind.RANDOM:
        return None
    if spec.kind is Kind.LONG:
        return g / 4, 3 * g / 4
    if n < 1:
        raise ValueError(f"{spec.kind.value} segments need n_segments >= 1")
    if spec.kind is Kind.SHORT:
        return g / n, 4 * g / n
    return g / math.sqrt(n), 4 * g / math.sqrt(n)


def _draw(spec: GenSpec) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(spec.seed)
    g, s = spec.grid, spec.n_segments
    y = rng.random(s) * g
    if spec.kind is Kind.RANDOM:
        a = rng.random(s) * g
        b = rng.random(s) * g
        x1, x2 = np.minimum(a, b), np.maximum(a, b)
    elif s > 0:
        lo, hi = length_range(spec)
        if lo >= g:
            raise ValueError(f"minimum {spec.kind.value} length {lo} >= grid {g}")
        hi = min(hi, g)
        length = lo + (hi - lo) * rng.random(s)
        x1 = rng.random(s) * (g - length)
        x2 = np.minimum(x1 + length, g)
    else:
        x1 = x2 = np.empty(0)
    # ids are y-ranks so a written file already carries assign_ids' numbering
    ids = np.empty(s, dtype=np.int64)
    ids[np.argsort(y, kind="stable")] = np.arange(1, s + 1)
    segs = make_segments(y, x1, x2, ids=ids)
    qx = rng.random(spec.n_queries) * g
    qy = rng.random(spec.n_queries) * g
    return segs, make_queries(qx, qy)


def gen_segments(spec: GenSpec) -> np.ndarray:
    return _draw(spec)[0]


def gen_queries(spec: GenSpec) -> np.ndarray:
    return _draw(spec)[1]


def generate(spec: GenSpec) -> np.ndarray:
    """Segments followed by queries, as one object array."""
    segs, qs = _draw(spec)
    return np.concatenate([segs, qs])
