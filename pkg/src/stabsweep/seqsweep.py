"""Sequential distribution sweeping with a max segment tree over the slabs.

Each level splits its slab into K vertical child slabs and sweeps the
objects once in y order.  Segments spanning child slabs are stored in a
segment tree over the K slabs; queries read the root-to-leaf path.  Copies
of queries and of segments (one per endpoint slab) form the y-sorted child
inputs.  A slab of at most M points goes to the plane-sweep base case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .config import RunConfig
from .core import QUERY, SEGMENT, Answers, StabAnswer, count_points
from .metrics import Metrics, StatTally

# past this depth a slab goes to the base case whatever its size
MAX_DEPTH = 64


@dataclass(frozen=True)
class SlabPartition:
    """K+1 increasing boundaries; slab i is [b_i, b_{i+1}), the last one closed."""

    boundaries: np.ndarray

    @property
    def k(self) -> int:
        return int(self.boundaries.shape[0]) - 1

    @property
    def degenerate(self) -> bool:
        return self.k < 2

    def locate(self, x: float) -> int:
        return int(K.locate(self.boundaries, self.k, float(x), False)[0])


def _points_x(objs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    q = objs["kind"] == QUERY
    s = ~q
    ends = np.concatenate([objs["x1"][s], objs["x2"][s]])
    ends = ends[(ends >= lo) & (ends <= hi)]
    return np.concatenate([objs["x1"][q], ends])


def compute_slab_boundaries(
    objs: np.ndarray, k: int, mode: str = "uniform", extent: tuple[float, float] | None = None
) -> SlabPartition:
    """Split the x-extent of the points into k slabs.

    ``uniform`` cuts the extent into equal widths; ``equalcount`` places a
    boundary at every ceil(n/k)-th point in x order (duplicates collapse, so
    fewer slabs may result).  A zero-width extent yields a single slab,
    which callers treat as "go to the base case".
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if objs.shape[0] == 0:
        raise ValueError("no objects to partition")
    if extent is None:
        xs = _points_x(objs, -math.inf, math.inf)
        extent = (float(xs.min()), float(xs.max()))
    lo, hi = extent
    if not hi > lo:
        return SlabPartition(np.array([lo, lo]))
    if mode == "uniform":
        b = lo + np.arange(k + 1) * ((hi - lo) / k)
        b[k] = hi
        if not np.all(np.diff(b) > 0):
            return SlabPartition(np.array([lo, hi]))
        return SlabPartition(b)
    if mode == "equalcount":
        xs = np.sort(_points_x(objs, lo, hi))
        step = math.ceil(xs.shape[0] / k)
        b = np.unique(np.concatenate([xs[::step], xs[-1:]]))
        if b.shape[0] < 2:
            return SlabPartition(np.array([lo, lo]))
        return SlabPartition(b)
    raise ValueError(f"unknown partition mode {mode!r}")


@dataclass
class MaxSegTree:
    """Complete binary tree over k slab leaves, nodes 1..2k-1 (leaf i is node k+i).

    Each node holds the highest segment stored there so far.
    """

    k: int
    y: np.ndarray = field(repr=False)
    id: np.ndarray = field(repr=False)

    @classmethod
    def fresh(cls, k: int) -> MaxSegTree:
        return cls(k, np.full(2 * k, -np.inf), np.zeros(2 * k, dtype=np.int32))

    def node_values(self) -> tuple[np.ndarray, np.ndarray]:
        return self.y[1:], self.id[1:]

    @classmethod
    def from_nodes(cls, k: int, ys: np.ndarray, ids: np.ndarray) -> MaxSegTree:
        tree = cls.fresh(k)
        tree.y[1:] = ys
        tree.id[1:] = ids
        return tree


def spanned_slabs(partition: SlabPartition, x1: float, x2: float) -> tuple[int, int]:
    """Inclusive [l, r] of slabs fully inside [x1, x2]; empty when l > r."""
    b, k = partition.boundaries, partition.k
    in1 = bool(b[0] <= x1 <= b[k])
    in2 = bool(b[0] <= x2 <= b[k])
    i1 = partition.locate(x1) if in1 else -1
    i2 = partition.locate(x2) if in2 else -1
    return tuple(int(v) for v in K.span_range(b, k, float(x1), float(x2), i1, in1, i2, in2))


def st_update(tree: MaxSegTree, partition: SlabPartition, seg) -> int:
    """MAX a segment into the canonical nodes of the slabs it spans; returns nodes touched."""
    if seg["kind"] != SEGMENT:
        raise ValueError("st_update needs a segment")
    l, r = spanned_slabs(partition, seg["x1"], seg["x2"])
    if l > r:
        return 0
    return int(K.tree_update(tree.y, tree.id, tree.k, l, r, float(seg["y"]), int(seg["id"])))


def st_query(tree: MaxSegTree, slab_index: int) -> StabAnswer:
    if not 0 <= slab_index < tree.k:
        raise IndexError(slab_index)
    y, sid, _ = K.tree_query(tree.y, tree.id, tree.k, slab_index)
    return StabAnswer(float(y), int(sid))


@dataclass
class Slab:
    """Input of one invocation: a y-sorted object list and its point statistics."""

    objects: np.ndarray
    n_points: int
    n_segments: int
    n_queries: int
    xlo: float
    xhi: float

    @classmethod
    def root(cls, objs: np.ndarray) -> Slab:
        nseg = int(np.count_nonzero(objs["kind"] == SEGMENT))
        if objs.shape[0]:
            lo = float(objs["x1"].min())
            hi = float(objs["x2"].max())
        else:
            lo = hi = 0.0
        return cls(objs, count_points(objs), nseg, objs.shape[0] - nseg, lo, hi)


@dataclass
class LevelOutput:
    """Child slab lists of one distribution pass plus the final tree."""

    buffer: np.ndarray = field(repr=False)
    offsets: np.ndarray
    counts: np.ndarray
    seg_counts: np.ndarray
    query_counts: np.ndarray
    point_counts: np.ndarray
    xlo: np.ndarray
    xhi: np.ndarray
    tree: MaxSegTree
    stats: np.ndarray

    @property
    def k(self) -> int:
        return int(self.counts.shape[0])

    def slab_list(self, i: int) -> np.ndarray:
        return self.buffer[self.offsets[i] : self.offsets[i] + self.counts[i]]

    def slab(self, i: int) -> Slab:
        return Slab(
            self.slab_list(i), int(self.point_counts[i]), int(self.seg_counts[i]),
            int(self.query_counts[i]), float(self.xlo[i]), float(self.xhi[i]),
        )


def distribute_level(
    objs_y_sorted: np.ndarray,
    partition: SlabPartition,
    tree: MaxSegTree | None = None,
    naive: bool = False,
    instrument: bool = True,
    mode: str = "uniform",
) -> LevelOutput:
    """One y-ordered pass: answer queries from the tree, split objects into slabs.

    ``tree`` defaults to a fresh all-sentinel tree; a given tree is updated in
    place.  ``naive`` replaces the tree by one value per slab, updating every
    spanned slab individually.
    """
    k = partition.k
    if tree is None:
        tree = MaxSegTree.fresh(k)
    elif tree.k != k:
        raise ValueError("tree and partition disagree on k")
    buf, offs, cnt, segc, qc, ptc, xlo, xhi, stats = K.distribute(
        objs_y_sorted, partition.boundaries, k, mode == "uniform", tree.y, tree.id, naive, instrument
    )
    return LevelOutput(buf, offs, cnt, segc, qc, ptc, xlo, xhi, tree, stats)


def _base(slab: Slab, res_y, res_id, tally: StatTally, level: int, instrument: bool, owned: bool):
    objs = slab.objects if owned else slab.objects.copy()
    tally.add(level, K.base_case(objs, res_y, res_id, instrument))


def solve_slab(
    slab: Slab,
    config: RunConfig,
    res_y: np.ndarray,
    res_id: np.ndarray,
    tally: StatTally,
    level: int = 0,
    instrument: bool = True,
    depth: int = 0,
    owned: bool = True,
) -> None:
    """Recursive sequential distribution sweep of one slab, writing final answers.

    Passes are tallied by ``level``: a distribution pass at ``level``
    hands its children to ``level + 1``.  ``owned=False`` keeps the slab's
    own records unmodified (the base case writes answers into its input).
    """
    if slab.n_queries == 0:
        return
    if slab.n_segments == 0:
        K.flush_answers(slab.objects, res_y, res_id)
        return
    if slab.n_points <= config.M or depth >= MAX_DEPTH:
        _base(slab, res_y, res_id, tally, level, instrument, owned)
        return
    partition = compute_slab_boundaries(
        slab.objects, config.seq_k(slab.n_points), config.partition_mode, (slab.xlo, slab.xhi)
    )
    if partition.degenerate:
        _base(slab, res_y, res_id, tally, level, instrument, owned)
        return
    out = distribute_level(
        slab.objects, partition, None, config.naive_tree, instrument, config.partition_mode
    )
    tally.add(level, out.stats)
    for i in range(out.k):
        solve_slab(out.slab(i), config, res_y, res_id, tally, level + 1, instrument, depth + 1)


def seq_dist_sweep(
    objs_y_sorted: np.ndarray, config: RunConfig, metrics: Metrics | None = None
) -> Answers:
    res = Answers.empty(int(np.count_nonzero(objs_y_sorted["kind"] == QUERY)))
    instrument = metrics is not None and metrics.enabled
    tally = StatTally()
    solve_slab(Slab.root(objs_y_sorted), config, res.seg_y, res.seg_id, tally, 0, instrument, owned=False)
    tally.flush(metrics, 0)
    return res
