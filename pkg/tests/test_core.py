import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stabsweep.core import (
    QUERY, SEGMENT, SENTINEL, Answers, ParseError, StabAnswer, answer_key, assign_ids,
    count_points, make_objects, make_queries, make_segments, max_answer, prepare, read_objects,
    read_results, sort_by_x, sort_by_y, write_objects, write_results,
)


def kinds(objs):
    return objs["kind"].tolist()


def test_record_layout():
    objs = make_objects([(1, 0, 2)], [(1, 3)])
    # records are fixed size; fields are accessible by name
    assert objs.dtype.itemsize == 48
    assert objs["kind"].tolist() == [SEGMENT, QUERY]
    assert objs["ans_y"].tolist() == [-math.inf, -math.inf]


def test_make_segments_rejects_reversed_interval():
    with pytest.raises(ValueError):
        make_segments([1.0], [5.0], [2.0])


def test_sort_by_y_basic_and_ties():
    objs = make_objects([(2, 0, 1)], [(0, 1)])
    assert sort_by_y(objs)["y"].tolist() == [1, 2]
    objs = make_objects([(5, 0, 1)], [(0, 5)])
    # query first at equal y
    assert kinds(sort_by_y(objs)) == [QUERY, SEGMENT]


@given(st.lists(st.tuples(st.integers(0, 50), st.booleans()), max_size=200))
def test_sort_by_y_is_sorted_permutation(items):
    segs = [(y, 0, 1) for y, is_seg in items if is_seg]
    qs = [(0, y) for y, is_seg in items if not is_seg]
    objs = make_objects(segs, qs)
    out = sort_by_y(objs)
    assert np.all(np.diff(out["y"]) >= 0)
    keys = sorted(zip(objs["y"].tolist(), objs["kind"].tolist(), objs["id"].tolist()))
    assert list(zip(out["y"].tolist(), out["kind"].tolist(), out["id"].tolist())) == keys


def test_sort_by_x_ties():
    objs = make_objects([(0, 1, 5)], [(3, 1)])
    assert kinds(sort_by_x(objs)) == [SEGMENT, QUERY]
    objs = make_objects([(0, 3, 5)], [(3, 1)])
    # segment first at equal x
    assert kinds(sort_by_x(objs[::-1])) == [SEGMENT, QUERY]


@given(st.lists(st.integers(0, 100), max_size=200), st.lists(st.integers(0, 100), max_size=50))
def test_sort_by_x_is_sorted_permutation(seg_x, q_x):
    objs = make_objects([(0, x, x + 1) for x in seg_x], [(x, 0) for x in q_x])
    out = sort_by_x(objs)
    assert np.all(np.diff(out["x1"]) >= 0)
    assert sorted(out["x1"].tolist()) == sorted(objs["x1"].tolist())


def test_assign_ids():
    objs = sort_by_y(make_objects([(1, 0, 1), (3, 0, 1)]))
    assert assign_ids(objs)["id"].tolist() == [1, 2]
    objs = sort_by_y(make_objects([(2, 0, 1), (2, 5, 6)]))
    out = assign_ids(objs)
    assert out["id"].tolist() == [1, 2]
    # stable: the first-listed segment keeps the smaller id
    assert out["x1"].tolist() == [0, 5]


def test_assign_ids_follow_y_order():
    rng = np.random.default_rng(3)
    y = rng.integers(0, 1000, 10_000).astype(float)
    out = assign_ids(sort_by_y(make_segments(y, np.zeros_like(y), np.ones_like(y))))
    order = np.lexsort((out["id"], out["y"]))
    assert np.array_equal(out["id"][order], np.arange(1, 10_001))


def test_prepare_remembers_external_ids():
    objs = make_objects([(5, 0, 1), (1, 0, 1)], [(0, 9), (0, 2)])
    objs["id"] = [70, 80, 9, 4]
    inst = prepare(objs)
    assert inst.n_segments == 2 and inst.n_queries == 2
    assert inst.seg_ext.tolist() == [80, 70]
    assert inst.query_ext.tolist() == [9, 4]
    q = inst.objects[inst.objects["kind"] == QUERY]
    assert sorted(q["id"].tolist()) == [0, 1]


def test_answer_order():
    assert SENTINEL.is_sentinel
    lo, hi = StabAnswer(3.0, 1), StabAnswer(3.0, 2)
    assert max_answer(lo, hi) == hi == max_answer(hi, lo)
    assert answer_key(StabAnswer(4.0, 1)) > answer_key(hi)
    assert max_answer(SENTINEL, lo) == lo


def test_count_points():
    assert count_points(make_objects([(0, 1, 2), (0, 1, 2)], [(0, 0)])) == 5


def test_answers_mapping():
    a = Answers.empty(2)
    assert a[0] == SENTINEL and len(a) == 2 and list(a) == [0, 1]
    b = Answers.empty(2)
    b.seg_y[1], b.seg_id[1] = 4.0, 3
    assert a != b and a.mismatches(b).tolist() == [1]
    with pytest.raises(KeyError):
        a[2]


def test_objects_text_round_trip():
    objs = make_objects([(0.1, -2.5, 1e7), (3, 0, 0)], [(1 / 3, 2)])
    buf = io.StringIO()
    write_objects(buf, objs)
    back = read_objects(io.StringIO(buf.getvalue()))
    for f in ("y", "x1", "x2", "id", "kind"):
        assert back[f].tolist() == objs[f].tolist()


@given(st.lists(st.tuples(st.floats(-1e9, 1e9), st.floats(-1e9, 1e9), st.floats(-1e9, 1e9)), max_size=20))
def test_objects_text_round_trip_exact(segs):
    segs = [(y, min(a, b), max(a, b)) for y, a, b in segs]
    objs = make_objects(segs, [(y, a) for y, a, _ in segs])
    buf = io.StringIO()
    write_objects(buf, objs)
    back = read_objects(io.StringIO(buf.getvalue()))
    for f in ("y", "x1", "x2"):
        assert back[f].tolist() == objs[f].tolist()


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("S 1 0 0 1\nS 2 3 4\n", 2),
        ("Q 0 1 2\nX 1 2 3\n", 2),
        ("S 1 0 5 1\n", 1),
        ("S 0 0 0 1\n", 1),
        ("\n# comment\nQ a 1 2\n", 3),
    ],
)
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(ParseError) as err:
        read_objects(io.StringIO(text))
    assert err.value.lineno == lineno
    assert f"line {lineno}" in str(err.value)


def test_results_round_trip_uses_external_ids():
    objs = make_objects([(10, 0, 100)], [(5, 20), (5, 1)])
    objs["id"] = [42, 7, 3]
    inst = prepare(objs)
    ans = Answers.empty(2)
    ans.seg_y[0], ans.seg_id[0] = 10.0, 1
    buf = io.StringIO()
    write_results(buf, ans, inst)
    assert buf.getvalue() == "3 0 -inf\n7 42 10\n"
    back = read_results(io.StringIO(buf.getvalue()))
    assert back == {3: SENTINEL, 7: StabAnswer(10.0, 42)}


def test_read_results_bad_line():
    with pytest.raises(ParseError) as err:
        read_results(io.StringIO("0 0 -inf\n1 2\n"))
    assert err.value.lineno == 2
