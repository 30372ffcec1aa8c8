import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import T1_EXPECTED, as_dict, brute, instances, same_records, t1
from stabsweep._kernels import array_update
from stabsweep.config import Fixed, RunConfig
from stabsweep.core import QUERY, SEGMENT, make_objects, make_queries, prepare
from stabsweep.generators import GenSpec, generate
from stabsweep.metrics import Metrics, snapshot
from stabsweep.oracle import stab_oracle
from stabsweep.planesweep import plane_sweep
from stabsweep.seqsweep import (
    MaxSegTree, SlabPartition, compute_slab_boundaries, distribute_level, seq_dist_sweep,
    spanned_slabs, st_query, st_update,
)


def part(*b):
    return SlabPartition(np.array(b, dtype=float))


def seg(y, x1, x2, sid=1):
    s = make_objects([(y, x1, x2)])[0]
    s["id"] = sid
    return s


# --- slab boundaries

def test_uniform_boundaries():
    objs = make_objects([(0, 0, 100)])
    p = compute_slab_boundaries(objs, 4, "uniform", (0.0, 100.0))
    assert p.boundaries.tolist() == [0, 25, 50, 75, 100]


def test_uniform_boundaries_default_extent():
    objs = make_objects([(0, 10, 20)], [(50, 1)])
    assert compute_slab_boundaries(objs, 2).boundaries.tolist() == [10, 30, 50]


def test_equalcount_boundaries():
    objs = make_queries(np.arange(1, 9), np.zeros(8))
    p = compute_slab_boundaries(objs, 4, "equalcount")
    assert p.boundaries.tolist() == [1, 3, 5, 7, 8]


def test_equalcount_collapses_duplicates():
    objs = make_queries([1, 1, 1, 1, 1, 1, 2], np.zeros(7))
    p = compute_slab_boundaries(objs, 4, "equalcount")
    assert p.boundaries.tolist() == [1, 2]
    assert p.degenerate


@pytest.mark.parametrize("mode", ["uniform", "equalcount"])
def test_all_x_equal_is_degenerate(mode):
    objs = make_queries([3, 3, 3], [0, 1, 2])
    assert compute_slab_boundaries(objs, 4, mode).degenerate


def test_boundary_errors():
    with pytest.raises(ValueError):
        compute_slab_boundaries(make_queries([1, 2], [0, 0]), 1)
    with pytest.raises(ValueError):
        compute_slab_boundaries(make_queries([1, 2], [0, 0]), 2, "weird")


def test_locate_last_slab_closed():
    p = part(0, 25, 50, 75, 100)
    assert [p.locate(x) for x in (0, 24.9, 25, 99, 100)] == [0, 0, 1, 3, 3]


# --- segment tree

def test_full_span_updates_root_only():
    p = part(0, 25, 50, 75, 100)
    t = MaxSegTree.fresh(4)
    st_update(t, p, seg(9, 0, 100, 4))
    ys, _ = t.node_values()
    assert ys[0] == 9 and np.all(np.isneginf(ys[1:]))
    assert all(st_query(t, i) == (9.0, 4) for i in range(4))


def test_middle_span_canonical_nodes():
    p = part(0, 25, 50, 75, 100)
    t = MaxSegTree.fresh(4)
    st_update(t, p, seg(9, 25, 75))
    # canonical cover of leaves 1..2 is the two leaves themselves (nodes 5, 6)
    assert np.flatnonzero(np.isfinite(t.y)).tolist() == [5, 6]
    assert np.isneginf(t.y[4]) and np.isneginf(t.y[7])
    assert spanned_slabs(p, 25, 75) == (1, 2)
    assert spanned_slabs(p, 26, 75) == (2, 2)
    assert spanned_slabs(p, 26, 74) == (2, 1)


def test_max_monotone():
    p = part(0, 25, 50, 75, 100)
    t = MaxSegTree.fresh(4)
    st_update(t, p, seg(5, 0, 50, 2))
    st_update(t, p, seg(3, 0, 50, 1))
    assert st_query(t, 0) == (5.0, 2)


def test_fresh_tree_sentinel():
    t = MaxSegTree.fresh(5)
    assert all(st_query(t, i).is_sentinel for i in range(5))
    with pytest.raises(IndexError):
        st_query(t, 5)


def test_update_needs_segment():
    with pytest.raises(ValueError):
        st_update(MaxSegTree.fresh(2), part(0, 1, 2), make_queries([1], [1])[0])


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 40), st.lists(st.tuples(st.integers(0, 41), st.integers(0, 41), st.integers(0, 9)), max_size=60))
def test_tree_matches_k_array(k, updates):
    p = SlabPartition(np.arange(k + 1, dtype=float))
    t = MaxSegTree.fresh(k)
    ay, aid = np.full(2 * k, -np.inf), np.zeros(2 * k, dtype=np.int32)
    for sid, (a, b, y) in enumerate(updates, 1):
        a, b = min(a, b), max(a, b)
        st_update(t, p, seg(y, a, b, sid))
        l, r = spanned_slabs(p, a, b)
        if l <= r:
            array_update(ay, aid, k, l, r, float(y), sid)
        for i in range(k):
            assert st_query(t, i) == (ay[k + i], aid[k + i])


# --- one distribution pass

def test_distribute_t1_k2():
    objs = t1()
    out = distribute_level(objs, part(0, 50, 100))
    left, right = out.slab_list(0), out.slab_list(1)
    by_kind = lambda lst, kind: sorted(lst["id"][lst["kind"] == kind].tolist())
    # s2=[0,40] only left; s1=[0,100] split; s3=[60,100] only right
    assert by_kind(left, SEGMENT) == [1, 2]
    assert by_kind(right, SEGMENT) == [1, 3]
    q = right[(right["kind"] == QUERY) & (right["x1"] == 80)][0]
    assert (q["ans_y"], q["ans_id"]) == (10.0, 1)
    for lst in (left, right):
        assert np.all(np.diff(lst["y"]) >= 0)


def test_distribute_all_in_one_slab():
    objs = prepare(make_objects([(1, 0, 5), (2, 1, 4)], [(3, 3)])).objects
    out = distribute_level(objs, part(0, 10, 20))
    assert out.counts.tolist() == [3, 0]
    assert out.stats[0] == 3


def test_distribute_input_unmodified():
    objs = t1()
    before = objs.copy()
    distribute_level(objs, part(0, 50, 100))
    assert same_records(objs, before)


# --- full solver

SMALL = RunConfig(M=4, B=2, k_rule=Fixed(2))


def test_small_input_equals_plane_sweep():
    objs = prepare(generate(GenSpec("random", 100, 100, seed=1))).objects
    assert seq_dist_sweep(objs, RunConfig(M=1024, B=8)) == plane_sweep(objs)


def test_t1_m2_k2():
    assert as_dict(seq_dist_sweep(t1(), RunConfig(M=2, B=1, k_rule=Fixed(2)))) == T1_EXPECTED


@pytest.mark.parametrize("mode", ["uniform", "equalcount"])
@settings(max_examples=150, deadline=None)
@given(objs=instances(40, 40), k=st.integers(2, 5))
def test_matches_brute_force(objs, k, mode):
    config = RunConfig(M=4, B=1, k_rule=Fixed(k), partition_mode=mode)
    assert as_dict(seq_dist_sweep(objs, config)) == brute(objs)


def test_long_10k_m512():
    objs = prepare(generate(GenSpec("long", 10_000, 10_000, seed=6))).objects
    ans = seq_dist_sweep(objs, RunConfig(M=512, B=8))
    assert ans.mismatches(stab_oracle(objs)).shape[0] == 0


@pytest.mark.parametrize("kind", ["random", "short", "medium", "long"])
@pytest.mark.parametrize("mode", ["uniform", "equalcount"])
def test_generated_kinds(kind, mode):
    objs = prepare(generate(GenSpec(kind, 3000, 3000, seed=2))).objects
    for config in (RunConfig(M=64, B=8, partition_mode=mode),
                   RunConfig(M=64, B=8, partition_mode=mode, naive_tree=True)):
        assert seq_dist_sweep(objs, config) == stab_oracle(objs)


def test_coincident_x_terminates():
    # every point at the same x: the partition degenerates and the base case takes over
    objs = prepare(make_objects([(i, 5, 5) for i in range(50)], [(5, i + 0.5) for i in range(50)])).objects
    assert seq_dist_sweep(objs, SMALL) == stab_oracle(objs)


def test_touches_per_level_equal_n():
    n = 6000
    objs = prepare(generate(GenSpec("random", n // 2, n // 2, seed=2))).objects
    m = Metrics()
    seq_dist_sweep(objs, RunConfig(M=64, B=8), m)
    rep = snapshot(m)
    assert all(c == n for _, c in rep.per_level[:-1])
    assert rep.per_worker == (rep.touches_total,)


def test_input_unmodified():
    objs = prepare(generate(GenSpec("long", 500, 500, seed=2))).objects
    before = objs.copy()
    seq_dist_sweep(objs, SMALL)
    seq_dist_sweep(objs, RunConfig(M=10_000, B=8))
    assert same_records(objs, before)


def test_buffer_regrowth_still_correct():
    # everything lands in one child; preallocated slack is exceeded
    segs = [(i, 0, 1) for i in range(200)] + [(500, 0, 100)]
    qs = [(0.5, i + 0.5) for i in range(200)] + [(100, 600)]
    objs = prepare(make_objects(segs, qs)).objects
    m = Metrics()
    ans = seq_dist_sweep(objs, RunConfig(M=16, B=2, k_rule=Fixed(4)), m)
    assert ans == stab_oracle(objs)
    assert snapshot(m).regrowths > 0
