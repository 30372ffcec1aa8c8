"""2-way divide and conquer: halve each slab's x-extent until it is small.

Every level keeps one spanning value per half (no tree) and copies objects
to the halves holding their endpoints.  Slabs are processed level by level
with at most P tasks in flight; a slab of at most ``base_threshold`` points
is solved by plane sweep.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels as K
from .core import QUERY, Answers
from .metrics import Metrics, StatTally
from .seqsweep import MAX_DEPTH, Slab, compute_slab_boundaries, distribute_level

DEFAULT_BASE_THRESHOLD = 1024


def _step(slab: Slab, depth: int, base_threshold: int, res_y, res_id, instrument: bool, owned: bool):
    """Process one slab; returns (children, stats or None)."""
    if slab.n_queries == 0:
        return [], None
    if slab.n_segments == 0:
        K.flush_answers(slab.objects, res_y, res_id)
        return [], None
    partition = None
    if slab.n_points > base_threshold and depth < MAX_DEPTH:
        partition = compute_slab_boundaries(slab.objects, 2, "uniform", (slab.xlo, slab.xhi))
        if partition.degenerate:
            partition = None
    if partition is None:
        objs = slab.objects if owned else slab.objects.copy()
        return [], K.base_case(objs, res_y, res_id, instrument)
    out = distribute_level(slab.objects, partition, naive=True, instrument=instrument)
    return [out.slab(0), out.slab(1)], out.stats


def two_way_sweep(
    objs_y_sorted: np.ndarray,
    base_threshold: int = DEFAULT_BASE_THRESHOLD,
    P: int = 1,
    metrics: Metrics | None = None,
) -> Answers:
    if base_threshold < 2:
        raise ValueError("base_threshold must be >= 2")
    res = Answers.empty(int(np.count_nonzero(objs_y_sorted["kind"] == QUERY)))
    instrument = metrics is not None and metrics.enabled
    tally = StatTally()
    frontier = [Slab.root(objs_y_sorted)]
    depth = 0
    with ThreadPoolExecutor(max_workers=P) as pool:
        while frontier:
            owned = depth > 0
            results = list(
                pool.map(
                    lambda s: _step(s, depth, base_threshold, res.seg_y, res.seg_id, instrument, owned),
                    frontier,
                )
            )
            frontier = []
            for children, stats in results:
                frontier.extend(children)
                if stats is not None:
                    tally.add(depth, stats)
            depth += 1
    tally.flush(metrics, 0)
    return res
