"""Object records, orderings, identifiers and text formats shared by all solvers.

Segments and query points live in one homogeneous numpy structured array
(``PLANE_DTYPE``).  A query carries its running answer ``(ans_y, ans_id)``
inside the record, so sweeps can update answers on the copies they write.
"""

from __future__ import annotations

import math
import os
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple, TextIO, Union

import numpy as np

QUERY = 0
SEGMENT = 1

SENTINEL_ID = 0
NEG_INF = -math.inf

PLANE_DTYPE = np.dtype(
    [
        ("y", "f8"),
        ("x1", "f8"),
        ("x2", "f8"),
        ("ans_y", "f8"),
        ("id", "i4"),
        ("ans_id", "i4"),
        ("kind", "i1"),
        # 1 on the copy of an object that counts towards touches at a level;
        # the second copy of a segment split across two slabs carries 0.
        ("primary", "i1"),
    ],
    align=True,
)


class StabAnswer(NamedTuple):
    seg_y: float
    seg_id: int

    @property
    def is_sentinel(self) -> bool:
        return self.seg_id == SENTINEL_ID


SENTINEL = StabAnswer(NEG_INF, SENTINEL_ID)


def answer_key(a: StabAnswer) -> tuple[float, int]:
    return (a.seg_y, a.seg_id)


def max_answer(a: StabAnswer, b: StabAnswer) -> StabAnswer:
    """MAX by (seg_y, seg_id); SENTINEL is the identity."""
    return b if (b.seg_y, b.seg_id) > (a.seg_y, a.seg_id) else a


# --------------------------------------------------------------------------
# construction


def empty_objects(n: int = 0) -> np.ndarray:
    objs = np.zeros(n, dtype=PLANE_DTYPE)
    objs["ans_y"] = NEG_INF
    objs["primary"] = 1
    return objs


def make_segments(y, x1, x2, ids=None) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if np.any(x1 > x2):
        raise ValueError("segment with x1 > x2")
    objs = empty_objects(y.shape[0])
    objs["kind"] = SEGMENT
    objs["y"] = y
    objs["x1"] = x1
    objs["x2"] = x2
    objs["id"] = np.arange(1, y.shape[0] + 1) if ids is None else ids
    return objs


def make_queries(x, y, ids=None) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    objs = empty_objects(x.shape[0])
    objs["kind"] = QUERY
    objs["y"] = y
    objs["x1"] = x
    objs["x2"] = x
    objs["id"] = np.arange(x.shape[0]) if ids is None else ids
    return objs


def make_objects(segments: Iterable = (), queries: Iterable = ()) -> np.ndarray:
    """Build an object array from ``(y, x1, x2)`` segments and ``(x, y)`` queries.

    Segments get ids 1..s and queries 0..q-1 in the order given.
    """
    segs = np.asarray(list(segments), dtype=np.float64).reshape(-1, 3)
    qs = np.asarray(list(queries), dtype=np.float64).reshape(-1, 2)
    return np.concatenate(
        [make_segments(segs[:, 0], segs[:, 1], segs[:, 2]), make_queries(qs[:, 0], qs[:, 1])]
    )


def is_query(objs: np.ndarray) -> np.ndarray:
    return objs["kind"] == QUERY


def is_segment(objs: np.ndarray) -> np.ndarray:
    return objs["kind"] == SEGMENT


def count_points(objs: np.ndarray) -> int:
    """Query points plus segment endpoints (the slab-size measure used against M)."""
    nseg = int(np.count_nonzero(objs["kind"] == SEGMENT))
    return (objs.shape[0] - nseg) + 2 * nseg


def x_extent(objs: np.ndarray) -> tuple[float, float]:
    if objs.shape[0] == 0:
        return (0.0, 0.0)
    return float(objs["x1"].min()), float(objs["x2"].max())


# --------------------------------------------------------------------------
# orderings and identifiers


def sort_by_y(objs: np.ndarray) -> np.ndarray:
    """Stable y order; at equal y queries precede segments, then by id.

    Queries first at a tie is what makes "below" strict in every sweep.
    """
    order = np.lexsort((objs["id"], objs["kind"], objs["y"]))
    return objs[order]


def sort_by_x(objs: np.ndarray) -> np.ndarray:
    """Order by x1; at equal x segments (insert events) precede queries, then id."""
    order = np.lexsort((objs["id"], SEGMENT - objs["kind"], objs["x1"]))
    return objs[order]


def assign_ids(objs_sorted_by_y: np.ndarray) -> np.ndarray:
    """Give segments ids 1..s in encounter order, so id order equals y order."""
    out = objs_sorted_by_y.copy()
    seg = out["kind"] == SEGMENT
    out["id"][seg] = np.arange(1, int(np.count_nonzero(seg)) + 1)
    return out


@dataclass
class Instance:
    """A y-sorted, id-assigned object array plus maps back to external ids.

    ``objects`` uses dense query ids 0..q-1 (input order) and segment ids
    1..s (y-rank).  ``query_ext[qid]`` and ``seg_ext[sid - 1]`` give the ids
    that appeared in the input.
    """

    objects: np.ndarray
    query_ext: np.ndarray
    seg_ext: np.ndarray
    n_segments: int = field(init=False)
    n_queries: int = field(init=False)

    def __post_init__(self) -> None:
        self.n_queries = int(self.query_ext.shape[0])
        self.n_segments = int(self.seg_ext.shape[0])

    def __len__(self) -> int:
        return int(self.objects.shape[0])


def prepare(objs: np.ndarray) -> Instance:
    """Sort by y and assign ids, remembering the input's own identifiers.

    Equivalent to replacing query ids by dense ids, then ``sort_by_y`` and
    ``assign_ids``, but makes a single copy of the records.
    """
    q = objs["kind"] == QUERY
    query_ext = objs["id"][q].copy()
    key = objs["id"].astype(np.int64)
    key[q] = np.arange(query_ext.shape[0])
    order = np.lexsort((key, objs["kind"], objs["y"]))
    ordered = objs[order]
    ordered["id"] = key[order]
    del key, order
    ordered["ans_y"] = NEG_INF
    ordered["ans_id"] = SENTINEL_ID
    ordered["primary"] = 1
    seg = ordered["kind"] == SEGMENT
    seg_ext = ordered["id"][seg].copy()
    ordered["id"][seg] = np.arange(1, seg_ext.shape[0] + 1)
    return Instance(ordered, query_ext, seg_ext)


# --------------------------------------------------------------------------
# answers


class Answers(Mapping):
    """Mapping query id -> StabAnswer backed by dense arrays indexed by qid."""

    def __init__(self, seg_y: np.ndarray, seg_id: np.ndarray):
        self.seg_y = np.asarray(seg_y, dtype=np.float64)
        self.seg_id = np.asarray(seg_id, dtype=np.int64)

    @classmethod
    def empty(cls, n_queries: int) -> Answers:
        return cls(np.full(n_queries, NEG_INF), np.zeros(n_queries, dtype=np.int64))

    def __getitem__(self, qid: int) -> StabAnswer:
        if not 0 <= qid < self.seg_y.shape[0]:
            raise KeyError(qid)
        return StabAnswer(float(self.seg_y[qid]), int(self.seg_id[qid]))

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.seg_y.shape[0]))

    def __len__(self) -> int:
        return int(self.seg_y.shape[0])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Answers):
            return (
                self.seg_y.shape == other.seg_y.shape
                and np.array_equal(self.seg_id, other.seg_id)
                and np.array_equal(self.seg_y, other.seg_y)
            )
        return Mapping.__eq__(self, other)

    __hash__ = None  # type: ignore[assignment]

    def mismatches(self, other: Answers) -> np.ndarray:
        differ = (self.seg_id != other.seg_id) | (self.seg_y != other.seg_y)
        return np.flatnonzero(differ)

    def __repr__(self) -> str:
        return f"Answers(n={len(self)})"


# --------------------------------------------------------------------------
# text formats


class ParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.rstrip()!r}")
        self.lineno = lineno


PathOrFile = Union[str, os.PathLike, TextIO]


def fmt(v: float) -> str:
    # repr is the shortest string that parses back to the same double
    if v == NEG_INF:
        return "-inf"
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(float(v))


def _open(target: PathOrFile, mode: str):
    if hasattr(target, "write") or hasattr(target, "read"):
        return _NoClose(target)
    return open(target, mode, encoding="ascii")


class _NoClose:
    def __init__(self, f):
        self.f = f

    def __enter__(self):
        return self.f

    def __exit__(self, *exc):
        return False


def write_objects(target: PathOrFile, objs: np.ndarray) -> None:
    """``S <id> <y> <x1> <x2>`` for segments, ``Q <id> <x> <y>`` for queries."""
    with _open(target, "w") as f:
        for o in objs.tolist():
            y, x1, x2, _, oid, _, kind, _ = o
            if kind == SEGMENT:
                f.write(f"S {oid} {fmt(y)} {fmt(x1)} {fmt(x2)}\n")
            else:
                f.write(f"Q {oid} {fmt(x1)} {fmt(y)}\n")


def read_objects(source: PathOrFile) -> np.ndarray:
    segs: list[tuple[float, float, float]] = []
    seg_ids: list[int] = []
    qs: list[tuple[float, float]] = []
    q_ids: list[int] = []
    with _open(source, "r") as f:
        for lineno, line in enumerate(f, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            try:
                if parts[0] == "S" and len(parts) == 5:
                    oid = int(parts[1])
                    y, x1, x2 = float(parts[2]), float(parts[3]), float(parts[4])
                    if oid < 1:
                        raise ParseError(lineno, line, "segment id must be >= 1")
                    if not x1 <= x2:
                        raise ParseError(lineno, line, "segment has x1 > x2")
                    segs.append((y, x1, x2))
                    seg_ids.append(oid)
                elif parts[0] == "Q" and len(parts) == 4:
                    q_ids.append(int(parts[1]))
                    qs.append((float(parts[2]), float(parts[3])))
                else:
                    raise ParseError(lineno, line, "expected 'S id y x1 x2' or 'Q id x y'")
            except ParseError:
                raise
            except ValueError as exc:
                raise ParseError(lineno, line, str(exc)) from None
    s = np.asarray(segs, dtype=np.float64).reshape(-1, 3)
    q = np.asarray(qs, dtype=np.float64).reshape(-1, 2)
    return np.concatenate(
        [
            make_segments(s[:, 0], s[:, 1], s[:, 2], ids=np.asarray(seg_ids, dtype=np.int64)),
            make_queries(q[:, 0], q[:, 1], ids=np.asarray(q_ids, dtype=np.int64)),
        ]
    )


def write_results(target: PathOrFile, answers: Answers, inst: Instance | None = None) -> None:
    """``<query_id> <seg_id> <seg_y>`` per query, ``0 -inf`` for no segment below."""
    qids = np.arange(len(answers)) if inst is None else inst.query_ext
    sids = answers.seg_id
    if inst is not None:
        ext = np.concatenate([[SENTINEL_ID], inst.seg_ext]).astype(np.int64)
        sids = ext[sids]
    order = np.argsort(qids, kind="stable")
    with _open(target, "w") as f:
        for qid, sid, sy in zip(qids[order].tolist(), sids[order].tolist(), answers.seg_y[order].tolist()):
            f.write(f"{qid} {sid} {fmt(sy)}\n")


def read_results(source: PathOrFile) -> dict[int, StabAnswer]:
    out: dict[int, StabAnswer] = {}
    with _open(source, "r") as f:
        for lineno, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ParseError(lineno, line, "expected '<query_id> <seg_id> <seg_y>'")
            try:
                out[int(parts[0])] = StabAnswer(float(parts[2]), int(parts[1]))
            except ValueError as exc:
                raise ParseError(lineno, line, str(exc)) from None
    return out
