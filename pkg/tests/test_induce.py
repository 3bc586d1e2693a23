import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimotif import DirectedGraph, Strategy, degree_sum, induced_edges, split_point
from dimotif.induce import Scratch, split_index

from conftest import bidirected_complete, hub_graph, random_digraph

ALL = list(Strategy)


def exhaustive(g, S):
    S = sorted(set(S))
    return sorted((u, v) for u in S for v in S if u != v and g.has_edge(u, v))


@pytest.mark.parametrize("strategy", ALL)
def test_complete_bidirected(strategy):
    g = bidirected_complete(4)
    assert len(induced_edges(g, range(4), strategy)) == 12


@pytest.mark.parametrize("strategy", ALL)
def test_non_adjacent_pair(strategy):
    g = DirectedGraph(4, [(0, 1), (2, 3)])
    assert induced_edges(g, [0, 2], strategy) == []


def test_star_with_leaf_edges():
    edges = [(0, i) for i in range(1, 10)] + [(1, 2), (2, 1), (3, 4), (2, 5)]
    g = DirectedGraph(10, edges)
    want = exhaustive(g, [1, 2, 0])
    for s in ALL:
        assert induced_edges(g, [1, 2, 0], s) == want


def test_out_of_range_vertex():
    g = DirectedGraph(3, [(0, 1)])
    with pytest.raises(IndexError):
        induced_edges(g, [0, 3])


def test_strategy_parse():
    assert Strategy.parse("NeighborScan") is Strategy.SCAN
    assert Strategy.parse(Strategy.SPLIT) is Strategy.SPLIT
    with pytest.raises(ValueError):
        Strategy.parse("magic")


def test_work_counters_are_exact():
    g = random_digraph(40, 0.15, 3)
    rng = np.random.default_rng(0)
    for _ in range(50):
        S = sorted(set(rng.choice(40, size=rng.integers(1, 40)).tolist()))
        c = {}
        induced_edges(g, S, Strategy.PAIRWISE, counters=c)
        assert c == {"edge_queries": len(S) * (len(S) - 1), "membership_tests": 0}
        c = {}
        induced_edges(g, S, Strategy.SCAN, counters=c)
        assert c == {"edge_queries": 0, "membership_tests": degree_sum(g, S)}


def test_adaptive_follows_the_cheaper_side():
    g = hub_graph(200)
    c = {}
    induced_edges(g, [0, 1], Strategy.ADAPTIVE, counters=c)  # |S|^2 = 4 < D(S)
    assert c["edge_queries"] == 2 and c["membership_tests"] == 0
    c = {}
    induced_edges(g, range(3, 200), Strategy.ADAPTIVE, counters=c)
    assert c["edge_queries"] == 0 and c["membership_tests"] == degree_sum(g, range(3, 200))


def test_split_point_examples():
    p, obj = split_index(np.array([1, 1, 1, 9]))
    assert (p, obj) == (3, 4)
    assert split_index(np.zeros(5, dtype=np.int64)) == (5, 0)
    assert split_index(np.array([0])) == (1, 0)
    assert split_index(np.array([1])) == (0, 1)
    assert split_index(np.array([4])) == (0, 1)


def test_split_point_object():
    # degrees: 0 -> 9, others 1
    g = DirectedGraph(10, [(0, i) for i in range(1, 10)])
    sp = split_point(g, [0, 1, 2, 3])
    assert sp.p == 3 and sp.s2 == (0,) and set(sp.s1) == {1, 2, 3} and sp.objective == 4
    with pytest.raises(ValueError):
        split_point(g, [])


@given(st.lists(st.integers(0, 30), min_size=1, max_size=40))
def test_split_index_is_exhaustive_minimum(degs):
    degs = np.sort(np.array(degs, dtype=np.int64))
    values = [int(degs[:p].sum()) + (len(degs) - p) ** 2 for p in range(len(degs) + 1)]
    best = min(values)
    p, obj = split_index(degs)
    assert obj == best and p == values.index(best)


@given(st.integers(2, 60), st.floats(0.0, 0.5), st.integers(0, 10**6), st.data())
def test_strategies_agree(n, p, seed, data):
    g = random_digraph(n, p, seed)
    S = data.draw(st.sets(st.integers(0, n - 1), max_size=n))
    want = exhaustive(g, S)
    scratch = Scratch(g)
    for s in ALL:
        assert induced_edges(g, S, s, scratch=scratch) == want
    assert not scratch.mark.any()
