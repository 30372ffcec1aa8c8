"""Parallel distribution sweeping: one P-way level, then sequential recursion per slab.

Pipeline (fork-join, barrier between phases):

1. the y-sorted input is cut into P contiguous chunks, lower y to lower
   worker ids; each worker sweeps its chunk with a private max segment tree;
2. the P x (2K-1) matrix of final tree nodes is scanned sequentially into
   an exclusive prefix maximum over workers;
3. slab i is assembled by worker i mod P from the workers' partial chunks,
   and queries still holding the sentinel take the prefix maximum along
   their slab's root-to-leaf path;
4. each slab is finished by the sequential solver on its owning worker.

With ``two_sweep`` the workers instead repeat step 1 starting from their
prefix trees, and step 3 is a plain concatenation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .config import RunConfig
from .core import PLANE_DTYPE, QUERY, Answers
from .metrics import Metrics, StatTally
from .seqsweep import (
    LevelOutput,
    MaxSegTree,
    Slab,
    SlabPartition,
    compute_slab_boundaries,
    distribute_level,
    solve_slab,
)


def partition_chunks(n: int, P: int) -> list[range]:
    """P contiguous index ranges whose sizes differ by at most one, larger first."""
    base, extra = divmod(n, P)
    out, start = [], 0
    for j in range(P):
        size = base + (1 if j < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def worker_sweep(
    chunk: np.ndarray,
    partition: SlabPartition,
    tree: MaxSegTree | None = None,
    naive: bool = False,
    instrument: bool = True,
    mode: str = "uniform",
) -> LevelOutput:
    """A worker's sequential sweep of its chunk: partial slab lists and final tree."""
    return distribute_level(chunk, partition, tree, naive, instrument, mode)


@dataclass
class ReductionMatrix:
    """Row j holds worker j's tree node values; column c is tree node c + 1."""

    y: np.ndarray
    id: np.ndarray

    @classmethod
    def from_trees(cls, trees: list[MaxSegTree]) -> ReductionMatrix:
        ys = np.stack([t.node_values()[0] for t in trees])
        ids = np.stack([t.node_values()[1] for t in trees]).astype(np.int64)
        return cls(ys, ids)

    @property
    def shape(self) -> tuple[int, int]:
        return self.y.shape


def segmented_prefix_max(matrix: ReductionMatrix) -> ReductionMatrix:
    """Exclusive max-scan down each column: row j gets the max of rows < j."""
    P, cols = matrix.shape
    out_y = np.full((P, cols), -np.inf)
    out_id = np.zeros((P, cols), dtype=np.int64)
    run_y = np.full(cols, -np.inf)
    run_id = np.zeros(cols, dtype=np.int64)
    for j in range(P):
        out_y[j] = run_y
        out_id[j] = run_id
        row_y, row_id = matrix.y[j], matrix.id[j]
        up = (row_y > run_y) | ((row_y == run_y) & (row_id > run_id))
        run_y = np.where(up, row_y, run_y)
        run_id = np.where(up, row_id, run_id)
    return ReductionMatrix(out_y, out_id)


def path_max(prefix: ReductionMatrix, k: int) -> tuple[np.ndarray, np.ndarray]:
    """(P, k) arrays: max of prefix values over the root-to-leaf path of each slab."""
    P = prefix.shape[0]
    py = np.full((P, k), -np.inf)
    pid = np.zeros((P, k), dtype=np.int64)
    for i in range(k):
        v = k + i
        while v >= 1:
            cy, cid = prefix.y[:, v - 1], prefix.id[:, v - 1]
            up = (cy > py[:, i]) | ((cy == py[:, i]) & (cid > pid[:, i]))
            py[:, i] = np.where(up, cy, py[:, i])
            pid[:, i] = np.where(up, cid, pid[:, i])
            v >>= 1
    return py, pid


def compact_slab(
    rows: list[LevelOutput], i: int, pm_y: np.ndarray, pm_id: np.ndarray, instrument: bool = True
) -> tuple[Slab, np.ndarray]:
    """Concatenate slab i's partial chunks in worker order, propagating prefix answers."""
    total = int(sum(r.counts[i] for r in rows))
    out = np.empty(total, dtype=PLANE_DTYPE)
    stats = np.zeros(K.N_STATS, dtype=np.int64)
    pos = 0
    for j, r in enumerate(rows):
        chunk = r.slab_list(i)
        stats[K.STAT_TOUCHES] += K.copy_propagate(
            out, pos, chunk, float(pm_y[j, i]), int(pm_id[j, i]), instrument
        )
        pos += chunk.shape[0]
    slab = Slab(
        out,
        int(sum(r.point_counts[i] for r in rows)),
        int(sum(r.seg_counts[i] for r in rows)),
        int(sum(r.query_counts[i] for r in rows)),
        float(min(r.xlo[i] for r in rows)),
        float(max(r.xhi[i] for r in rows)),
    )
    return slab, stats


def propagate_and_compact(
    rows: list[LevelOutput], prefix: ReductionMatrix | None, instrument: bool = True
) -> list[Slab]:
    """All child slabs as contiguous y-sorted lists (``prefix=None``: concatenation only)."""
    k = rows[0].k
    if prefix is None:
        pm_y, pm_id = np.full((len(rows), k), -np.inf), np.zeros((len(rows), k), dtype=np.int64)
    else:
        pm_y, pm_id = path_max(prefix, k)
    return [compact_slab(rows, i, pm_y, pm_id, instrument)[0] for i in range(k)]


def par_dist_sweep(
    objs_y_sorted: np.ndarray, config: RunConfig, metrics: Metrics | None = None
) -> Answers:
    P = config.P
    objs = objs_y_sorted
    res = Answers.empty(int(np.count_nonzero(objs["kind"] == QUERY)))
    instrument = metrics is not None and metrics.enabled
    tallies = [StatTally() for _ in range(P)]
    phases = metrics if metrics is not None else Metrics(enabled=False)
    root = Slab.root(objs)
    if root.n_queries == 0:
        return res
    if root.n_segments == 0:
        K.flush_answers(objs, res.seg_y, res.seg_id)
        return res
    k = config.par_k(root.n_points)
    partition = compute_slab_boundaries(objs, k, config.partition_mode, (root.xlo, root.xhi))
    if partition.degenerate:
        solve_slab(root, config, res.seg_y, res.seg_id, tallies[0], 0, instrument, owned=False)
        _flush(tallies, metrics)
        return res
    k = partition.k
    chunks = [objs[r.start : r.stop] for r in partition_chunks(objs.shape[0], P)]
    owned = [[i for i in range(k) if i % P == w] for w in range(P)]

    def sweep(j: int, tree: MaxSegTree | None = None) -> LevelOutput:
        return worker_sweep(chunks[j], partition, tree, config.naive_tree, instrument, config.partition_mode)

    with ThreadPoolExecutor(max_workers=P) as pool:
        with phases.phase("par_sweep"):
            rows = list(pool.map(sweep, range(P)))
        for j, r in enumerate(rows):
            tallies[j].add(0, r.stats)
        with phases.phase("par_prefix"):
            prefix = segmented_prefix_max(ReductionMatrix.from_trees([r.tree for r in rows]))
        level = 1
        if config.two_sweep:
            with phases.phase("par_sweep"):
                trees = [MaxSegTree.from_nodes(k, prefix.y[j], prefix.id[j]) for j in range(P)]
                rows = list(pool.map(sweep, range(P), trees))
            for j, r in enumerate(rows):
                tallies[j].add(level, r.stats)
            level += 1
            pm_y = np.full((P, k), -np.inf)
            pm_id = np.zeros((P, k), dtype=np.int64)
        else:
            pm_y, pm_id = path_max(prefix, k)

        def compact(w: int) -> list[Slab]:
            slabs = []
            for i in owned[w]:
                slab, stats = compact_slab(rows, i, pm_y, pm_id, instrument)
                tallies[w].add(level, stats)
                slabs.append(slab)
            return slabs

        with phases.phase("par_compact"):
            slabs = list(pool.map(compact, range(P)))
        del rows

        def recurse(w: int) -> None:
            for slab in slabs[w]:
                solve_slab(slab, config, res.seg_y, res.seg_id, tallies[w], level + 1, instrument)

        with phases.phase("par_recurse"):
            list(pool.map(recurse, range(P)))
    _flush(tallies, metrics)
    return res


def _flush(tallies: list[StatTally], metrics: Metrics | None) -> None:
    if metrics is None:
        return
    metrics.prepare_workers(len(tallies))
    for j, t in enumerate(tallies):
        t.flush(metrics, j)
