"""Quadratic brute force: every query against every segment."""

from __future__ import annotations

import numpy as np

from .core import QUERY, SEGMENT, Answers

_CHUNK = 1 << 22  # max query x segment cells per block


def stab_oracle(objs: np.ndarray) -> Answers:
    """For each query, the segment maximising (y, id) among those strictly
    below it whose closed x-interval contains the query's x."""
    segs = objs[objs["kind"] == SEGMENT]
    qs = objs[objs["kind"] == QUERY]
    nq = int(qs["id"].max()) + 1 if qs.shape[0] else 0
    out = Answers.empty(nq)
    if segs.shape[0] == 0 or qs.shape[0] == 0:
        return out
    sy, sx1, sx2, sid = segs["y"], segs["x1"], segs["x2"], segs["id"].astype(np.int64)
    step = max(1, _CHUNK // segs.shape[0])
    for start in range(0, qs.shape[0], step):
        q = qs[start : start + step]
        qx = q["x1"][:, None]
        ok = (sy[None, :] < q["y"][:, None]) & (sx1[None, :] <= qx) & (qx <= sx2[None, :])
        ymax = np.where(ok, sy[None, :], -np.inf).max(axis=1)
        top = ok & (sy[None, :] == ymax[:, None])
        idmax = np.where(top, sid[None, :], 0).max(axis=1)
        out.seg_y[q["id"]] = ymax
        out.seg_id[q["id"]] = idmax
    return out
