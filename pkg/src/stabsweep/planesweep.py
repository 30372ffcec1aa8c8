"""Sweep-line solver and the base case of every distribution recursion.

A vertical line moves left to right.  Segments enter the active set at x1
and leave after x2, so endpoints are closed.  A query takes the highest
active segment strictly below it.  The active set is an ordered set over the
slab's segment y-ranks. Insert, delete and predecessor each cost
O(log s) node visits, and every visit is counted as one comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import QUERY, Answers, sort_by_y
from .metrics import Metrics


@dataclass
class SweepEvents:
    objects: np.ndarray  # y-sorted working copy; answers are written into it
    events: np.ndarray
    rank: np.ndarray
    n_segments: int


def _is_y_sorted(objs: np.ndarray) -> bool:
    if objs.shape[0] < 2:
        return True
    key = np.lexsort((objs["id"], objs["kind"], objs["y"]))
    return bool(np.all(key == np.arange(objs.shape[0])))


def prepare_events(objs: np.ndarray, presorted: bool = False) -> SweepEvents:
    """The sorting half of a plane sweep (excluded from solve time)."""
    work = objs.copy() if presorted or _is_y_sorted(objs) else sort_by_y(objs)
    events, rank, s = K.sweep_events(work)
    return SweepEvents(work, events, rank, int(s))


def n_query_slots(objs: np.ndarray) -> int:
    q = objs["id"][objs["kind"] == QUERY]
    return int(q.max()) + 1 if q.shape[0] else 0


def run_events(ev: SweepEvents, metrics: Metrics | None = None, level: int = 0) -> Answers:
    out = Answers.empty(n_query_slots(ev.objects))
    instrument = metrics is not None and metrics.enabled
    stats = K.sweep_run(
        ev.objects, ev.events, ev.rank, ev.n_segments, out.seg_y, out.seg_id,
        instrument, np.empty(0, dtype=np.int64),
    )
    if metrics is not None:
        metrics.record(0, level, stats)
    return out


def plane_sweep(objs: np.ndarray, metrics: Metrics | None = None) -> Answers:
    """Answer every query; queries' carried answers (ans_y, ans_id) are MAXed in."""
    return run_events(prepare_events(objs), metrics)


def active_sizes(objs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Active-set size seen by each query, in sweep order, with those queries' ids."""
    ev = prepare_events(objs)
    nq = int(np.count_nonzero(ev.objects["kind"] == QUERY))
    log = np.zeros(nq, dtype=np.int64)
    out = Answers.empty(n_query_slots(ev.objects))
    K.sweep_run(ev.objects, ev.events, ev.rank, ev.n_segments, out.seg_y, out.seg_id, False, log)
    qids = np.array([ev.objects["id"][-1 - e] for e in ev.events if e < 0], dtype=np.int64)
    return log, qids
