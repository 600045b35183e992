from itertools import combinations

import pytest

from pebblecc.depth_reduce import (
    greedy_reduce,
    is_reducible,
    min_reducing_set,
    verify_set,
)
from pebblecc.graph import (
    OutOfRange,
    TooLarge,
    chain,
    complete,
    depth,
    layered_random,
    pyramid,
)


def brute_min(g, d, convention):
    """Exhaustive minimum removal-set size; the independent oracle."""
    nodes = range(1, g.n + 1)
    for size in range(0, g.n + 1):
        for s in combinations(nodes, size):
            if depth(g, convention, excluding=frozenset(s)) <= d:
                return size
    raise AssertionError


def test_chain5_middle_node():
    r = is_reducible(chain(5), e=1, d=2, convention="nodes")
    assert r.reducible
    assert r.witness_set == frozenset({3})
    assert r.residual_depth == 2
    assert r.convention == "nodes"


def test_zero_budget_mirrors_depth():
    assert is_reducible(chain(3), e=0, d=3, convention="nodes").reducible
    r = is_reducible(chain(3), e=0, d=2, convention="nodes")
    assert not r.reducible
    assert r.witness_set is None
    assert r.residual_depth == 3


def test_full_budget_always_reducible():
    for g in (chain(4), pyramid(3), complete(3)):
        r = is_reducible(g, e=g.n, d=0, convention="nodes")
        assert r.reducible
        assert r.witness_set == frozenset(range(1, g.n + 1))
        assert r.residual_depth == 0


def test_min_reducing_set_chain9():
    e_min, s = min_reducing_set(chain(9), d=2, convention="nodes")
    assert e_min == 3
    assert verify_set(chain(9), s, 2, "nodes")


def test_min_reducing_set_complete4():
    e_min, s = min_reducing_set(complete(4), d=1, convention="nodes")
    assert e_min == 3
    assert verify_set(complete(4), s, 1, "nodes")


def test_min_reducing_set_trivial():
    assert min_reducing_set(chain(6), d=6, convention="nodes") == (0, frozenset())


def test_edge_convention():
    # depth <= 1 edge means components of at most two path nodes
    r = is_reducible(chain(5), e=1, d=1, convention="edges")
    assert r.reducible and r.witness_set == frozenset({3})
    # breaking every edge of a 5-chain takes two removals
    assert min_reducing_set(chain(5), d=0, convention="edges")[0] == 2
    assert min_reducing_set(chain(9), d=1, convention="edges")[0] == 3


def test_unknown_convention_rejected():
    with pytest.raises(ValueError):
        is_reducible(chain(3), e=1, d=1, convention="vertices")


def test_exact_matches_brute_force():
    graphs = [chain(7), pyramid(3), complete(5)] + [
        layered_random(8, seed=s) for s in range(6)
    ]
    for g in graphs:
        for convention in ("nodes", "edges"):
            for d in range(1, g.n + 1):
                expect = brute_min(g, d, convention)
                e_min, s = min_reducing_set(g, d, convention)
                assert e_min == expect
                assert verify_set(g, s, d, convention)
                # the decision agrees on both sides of the threshold
                assert is_reducible(g, e_min, d, convention).reducible
                if e_min > 0:
                    assert not is_reducible(g, e_min - 1, d, convention).reducible


def test_monotonicity():
    for seed in range(4):
        g = layered_random(9, seed=seed)
        for d in (1, 2, 3):
            e_min, _ = min_reducing_set(g, d, "nodes")
            assert is_reducible(g, e_min + 1, d, "nodes").reducible
            assert is_reducible(g, e_min, d + 1, "nodes").reducible


def test_greedy_reduce_examples():
    # all five nodes tie on path count; centrality steers the cut to the middle
    s = greedy_reduce(chain(5), d=2, convention="nodes")
    assert s == frozenset({3})
    assert verify_set(chain(5), s, 2, "nodes")
    assert greedy_reduce(chain(4), d=4, convention="nodes") == frozenset()


def test_greedy_sandwich():
    for seed in range(8):
        g = layered_random(10, seed=100 + seed)
        for d in (1, 2, 3):
            s = greedy_reduce(g, d, "nodes")
            assert verify_set(g, s, d, "nodes")
            e_min, _ = min_reducing_set(g, d, "nodes")
            assert e_min <= len(s)


def test_greedy_prefers_busiest_node():
    # every maximum path of a pyramid runs through its apex region; on the
    # 3-level pyramid the unique top node carries all of them
    s = greedy_reduce(pyramid(3), d=2, convention="nodes")
    assert 6 in s


def test_verify_set_examples():
    assert verify_set(chain(5), {3}, 2, "nodes")
    assert not verify_set(chain(5), set(), 2, "nodes")
    assert verify_set(chain(5), {1, 2, 3, 4, 5}, 0, "nodes")
    with pytest.raises(OutOfRange):
        verify_set(chain(5), {99}, 2, "nodes")


def test_witness_residual_depth_is_recomputed():
    g = layered_random(12, seed=9)
    r = is_reducible(g, e=3, d=3, convention="nodes")
    if r.reducible:
        assert r.residual_depth == depth(g, "nodes", excluding=r.witness_set)
        assert r.residual_depth <= 3


def test_visit_cap_raises():
    with pytest.raises(TooLarge):
        min_reducing_set(complete(8), d=1, convention="nodes", max_visits=5)
