from __future__ import annotations

import glob
import math
import os
from dataclasses import dataclass, field
from typing import Union

from .core import PLANE_DTYPE

FALLBACK_M = 1 << 21
DEFAULT_M_FRACTION = 0.25


@dataclass(frozen=True)
class AutoK:
    """K = max{2, min{floor(sqrt(n/P)), M/B, P}} at the parallel level,
    K = min{M/B, ceil(n/M)} at sequential levels (n counted in points)."""


@dataclass(frozen=True)
class Fixed:
    k: int

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"Fixed(k) requires k >= 2, got {self.k}")


KRule = Union[AutoK, Fixed]


def llc_bytes() -> int | None:
    """Size of the last-level data cache from sysfs, or None if unavailable."""
    best_level, best_size = 0, None
    for d in glob.glob("/sys/devices/system/cpu/cpu0/cache/index*"):
        try:
            with open(os.path.join(d, "level")) as f:
                level = int(f.read())
            with open(os.path.join(d, "type")) as f:
                kind = f.read().strip()
            with open(os.path.join(d, "size")) as f:
                text = f.read().strip()
        except OSError:
            continue
        if kind == "Instruction":
            continue
        mult = {"K": 1 << 10, "M": 1 << 20, "G": 1 << 30}.get(text[-1:], 1)
        size = int(text.rstrip("KMG")) * mult
        if level > best_level:
            best_level, best_size = level, size
    return best_size


def default_M(fraction: float = DEFAULT_M_FRACTION) -> int:
    """A fraction of the last-level cache, in objects; FALLBACK_M if undetectable."""
    size = llc_bytes()
    if size is None:
        return FALLBACK_M
    return max(64, int(size * fraction) // PLANE_DTYPE.itemsize)


PARTITION_MODES = ("uniform", "equalcount")


@dataclass(frozen=True)
class RunConfig:
    """Algorithm parameters.  M and B are in objects (M is a point budget per base case)."""

    M: int = field(default_factory=default_M)
    B: int = 64
    P: int = 1
    k_rule: KRule = AutoK()
    seed: int = 0
    partition_mode: str = "uniform"
    two_sweep: bool = False
    base_threshold: int = 1024
    # test-only: update every spanned slab instead of the segment tree
    naive_tree: bool = False

    def __post_init__(self) -> None:
        if self.B < 1 or self.M < 2 * self.B:
            raise ValueError(f"need M >= 2*B, got M={self.M}, B={self.B}")
        if self.P < 1:
            raise ValueError(f"need P >= 1, got {self.P}")
        if self.partition_mode not in PARTITION_MODES:
            raise ValueError(f"partition_mode must be one of {PARTITION_MODES}")
        if self.base_threshold < 2:
            raise ValueError("base_threshold must be >= 2")

    @property
    def uniform(self) -> bool:
        return self.partition_mode == "uniform"

    def seq_k(self, n_points: int) -> int:
        if isinstance(self.k_rule, Fixed):
            return self.k_rule.k
        return max(2, min(self.M // self.B, math.ceil(n_points / self.M)))

    def par_k(self, n_points: int) -> int:
        return max(2, min(math.isqrt(n_points // self.P), self.M // self.B, self.P))
