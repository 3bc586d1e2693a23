import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimotif import (DirectedGraph, RandomizerConfig, count_motifs, degree_vectors,
                     ensemble_stats, randomize, significance, switch_chain)

from conftest import bidirected_complete, random_digraph


def same_degrees(a, b):
    return all(np.array_equal(x, y) for x, y in zip(degree_vectors(a), degree_vectors(b)))


def test_config_validation():
    with pytest.raises(ValueError):
        RandomizerConfig(replicas=0)
    with pytest.raises(ValueError):
        RandomizerConfig(switches_per_edge=0)
    assert RandomizerConfig().replicas == 511
    assert RandomizerConfig(switches_per_edge=2.5).attempts(3) == 8


def test_tiny_switch_budget_keeps_graph():
    g = random_digraph(30, 0.1, 1)
    # one attempt only; either unchanged or a single valid switch
    out, sw = switch_chain(g, RandomizerConfig(switches_per_edge=1e-9), 0)
    assert sw.attempts == 1
    if sw.accepted == 0:
        assert set(map(tuple, out.edges.tolist())) == set(map(tuple, g.edges.tolist()))


def test_shared_source_cannot_switch():
    g = DirectedGraph(3, [(0, 1), (0, 2)])
    out, sw = switch_chain(g, RandomizerConfig(switches_per_edge=50, seed=3), 0)
    assert sw.accepted == 0
    assert sorted(out.edges.tolist()) == sorted(g.edges.tolist())


def test_complete_graph_is_frozen():
    g = bidirected_complete(5)
    out, sw = switch_chain(g, RandomizerConfig(seed=1), 0)
    assert sw.accepted == 0 and out == g


def test_needs_two_edges():
    with pytest.raises(ValueError):
        randomize(DirectedGraph(2, [(0, 1)]), RandomizerConfig(), 0)


def test_degrees_preserved_er():
    g = random_digraph(50, 0.08, 12)
    cfg = RandomizerConfig(switches_per_edge=1000 / g.m, seed=5)
    out, sw = switch_chain(g, cfg, 0)
    assert sw.attempts == 1000
    assert same_degrees(g, out)
    assert out.m == g.m and out.n_bidirected_pairs == g.n_bidirected_pairs
    assert sw.accepted > 0 and not np.array_equal(out.edges, g.edges)


def test_replicas_are_reproducible():
    g = random_digraph(40, 0.1, 2)
    cfg = RandomizerConfig(seed=99)
    assert randomize(g, cfg, 3) == randomize(g, cfg, 3)
    assert randomize(g, cfg, 3) != randomize(g, cfg, 4)
    assert randomize(g, cfg, 3) != randomize(g, RandomizerConfig(seed=98), 3)


def test_switch_success_rate():
    rng = np.random.default_rng(0)
    n = 60
    pairs = set()
    while len(pairs) < 200:
        u, v = rng.integers(n, size=2).tolist()
        if u != v:
            pairs.add((u, v))
    g = DirectedGraph(n, sorted(pairs))
    _, sw = switch_chain(g, RandomizerConfig(switches_per_edge=3, seed=1), 0)
    assert sw.attempts == 600
    assert sw.rate >= 0.10


def test_ensemble_arithmetic():
    e = ensemble_stats(3, {"x": 6}, [{"x": 2}, {"x": 4}])
    s = e.rows["x"]
    assert s.mean == 3.0
    assert s.std == pytest.approx(1.4142136, abs=1e-6)
    assert s.z == pytest.approx(2.1213203, abs=1e-6)
    assert s.p_value == 0.0


def test_constant_ensemble():
    e = ensemble_stats(3, {"x": 5}, [{"x": 5}] * 4)
    s = e.rows["x"]
    assert (s.mean, s.std, s.z, s.p_value) == (5.0, 0.0, None, 1.0)
    assert not s.z_defined


def test_absent_motifs_omitted():
    e = ensemble_stats(3, {"x": 0, "y": 2}, [{"x": 0, "z": 1}, {"y": 1}])
    assert set(e.rows) == {"y", "z"}
    assert e.rows["z"].f_orig == 0


def test_significance_end_to_end():
    g = random_digraph(25, 0.15, 4)
    cfg = RandomizerConfig(replicas=6, seed=11)
    s1 = significance(g, 3, cfg, workers=1)
    assert s1.original.counts == count_motifs(g, 3).counts
    for motif, st_ in s1.items():
        assert st_.f_orig == s1.original[motif]
        assert 0.0 <= st_.p_value <= 1.0 and st_.std >= 0
    s3 = significance(g, 3, cfg, workers=3)
    assert s3.rows == s1.rows


@given(st.integers(4, 30), st.floats(0.05, 0.5), st.integers(0, 10**6), st.integers(0, 50))
def test_degree_preservation_property(n, p, seed, index):
    g = random_digraph(n, p, seed)
    if g.m < 2:
        return
    out = randomize(g, RandomizerConfig(seed=seed), index)
    assert same_degrees(g, out)
    assert out.m == g.m
