from collections import Counter
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimotif import (CountingError, DirectedGraph, IsoCache, MotifId, assemble_motif_code,
                     brute_force_histogram, canonical_code, count_base, count_motifs,
                     encode_adjacency, enumerate_connected, iso_id, partition_adjacency,
                     pattern_multiplicity)
from dimotif import engine
from dimotif import isomorph as iso

from conftest import bidirected_complete, directed_cycle, random_digraph

PATH = DirectedGraph(3, [(0, 1), (1, 2)])


def motif_of(g, verts):
    return canonical_code(encode_adjacency(g, list(verts)))


def test_partition_path():
    assert partition_adjacency(PATH, [1]) == {"B": [2], "C": [0]}


def test_partition_two_vertex_base():
    g = DirectedGraph(3, [(0, 1), (1, 0), (2, 0)])
    assert partition_adjacency(g, [0, 1]) == {"CN": [2]}


def test_partition_random_cells():
    g = random_digraph(20, 0.2, 4)
    rng = np.random.default_rng(0)
    pairs = enumerate_connected(g, 2)
    for X in pairs[rng.choice(len(pairs), 10)].tolist():
        cells = partition_adjacency(g, X)
        members = [u for vs in cells.values() for u in vs]
        assert len(members) == len(set(members))
        adj = {u for x in X for u in g.neighbors(x).tolist()} - set(X)
        assert set(members) == adj
        for label, vs in cells.items():
            for u in vs:
                assert label == "".join(g.relation(u, x) for x in X)
    with pytest.raises(ValueError):
        partition_adjacency(g, [0, 1, 2, 3, 4])


def test_assemble_examples():
    v = DirectedGraph(1, [])
    code = assemble_motif_code(v, [0], "A", "B")
    want = DirectedGraph(3, [(0, 1), (1, 0), (0, 2)])
    assert canonical_code(code) == motif_of(want, range(3))
    out_star = DirectedGraph(3, [(0, 1), (0, 2)])
    assert canonical_code(assemble_motif_code(v, [0], "B", "B")) == motif_of(out_star, range(3))
    for bad in ("X", "AB", "N"):
        with pytest.raises(ValueError):
            assemble_motif_code(v, [0], bad, "A")


def test_assemble_matches_direct_encoding():
    rng = np.random.default_rng(9)
    cache = IsoCache()
    done = 0
    while done < 100:
        g = random_digraph(14, 0.25, int(rng.integers(1 << 30)))
        r = int(rng.integers(1, 5))
        bases = enumerate_connected(g, r)
        if not len(bases):
            continue
        X = bases[rng.integers(len(bases))].tolist()
        cells = partition_adjacency(g, X)
        ext = sorted(u for vs in cells.values() for u in vs)
        label = {u: lab for lab, vs in cells.items() for u in vs}
        cands = [(y, z) for y, z in combinations(ext, 2)
                 if not g.has_edge(y, z) and not g.has_edge(z, y)]
        if not cands:
            continue
        y, z = cands[rng.integers(len(cands))]
        code = assemble_motif_code(g, X, label[y], label[z])
        assert iso_id(code, cache) == iso_id(encode_adjacency(g, X + [y, z]), cache)
        done += 1


def test_count_base_path():
    hist = Counter()
    count_base(PATH, [1], hist)
    assert +hist == {motif_of(PATH, range(3)): 1}


def test_count_base_triangle():
    tri = bidirected_complete(3)
    hist = Counter()
    count_base(tri, [0], hist)
    assert +hist == {MotifId(3, 63): 1}
    assert sum(hist.values()) == 1


def test_count_base_empty_adjacency():
    g = DirectedGraph(4, [(0, 1)])
    hist = Counter()
    count_base(g, [2], hist)
    assert hist == Counter()


def test_count_base_rejects_disconnected_base():
    g = DirectedGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        count_base(g, [0, 2], Counter())


def test_pair_branch_conservation():
    # independent set around X: no edges inside adj(X)
    g = DirectedGraph(7, [(0, 1), (2, 0), (0, 3), (3, 0), (1, 4), (5, 1), (6, 1), (1, 6)])
    hist = Counter()
    count_base(g, [0, 1], hist)
    adj = 5
    assert sum(hist.values()) == adj * (adj - 1) // 2


def test_multiplicity_examples():
    cyc = motif_of(directed_cycle(3), range(3))
    assert pattern_multiplicity(cyc) == 3
    assert pattern_multiplicity(motif_of(PATH, range(3))) == 1
    k6 = motif_of(bidirected_complete(6), range(6))
    assert pattern_multiplicity(k6) == 15
    with pytest.raises(ValueError):
        pattern_multiplicity(MotifId(3, 1))


@pytest.mark.parametrize("k", [3, 4])
def test_multiplicity_kernel_matches_reference(k):
    tab = iso.canonical_table(k)
    mins = np.unique(tab)
    conn = [m for m in mins.tolist() if iso.is_connected(iso.AdjacencyCode(k, m))]
    got = engine.multiplicities(np.array(conn, dtype=np.int64), k)
    assert got.tolist() == [pattern_multiplicity(MotifId(k, m)) for m in conn]
    assert min(got) >= 1


def test_base_tables_give_minimal_orders():
    for r in (1, 2, 3, 4):
        cls, order, kcode = engine.base_tables(r)
        nbits = r * (r - 1)
        assert cls.size == 1 << nbits
        for code in range(0, 1 << nbits, max(1, (1 << nbits) // 300)):
            perm = order[code]
            relab = 0
            for a in range(r):
                for b in range(r):
                    if a != b and code >> iso.bit_index(perm[a], perm[b], r) & 1:
                        relab |= 1 << iso.bit_index(a, b, r)
            assert relab == iso.canonical_code(iso.AdjacencyCode(max(r, 1), code)).bits


def test_count_motifs_examples():
    k4 = bidirected_complete(4)
    h = count_motifs(k4, 3)
    assert h.counts == {MotifId(3, 63): 4}
    c6 = directed_cycle(6)
    assert count_motifs(c6, 6).counts == {motif_of(c6, range(6)): 1}
    h3 = count_motifs(c6, 3)
    assert h3.total == 6 and len(h3) == 1


def test_count_motifs_errors():
    g = bidirected_complete(4)
    with pytest.raises(ValueError):
        count_motifs(g, 5)
    with pytest.raises(ValueError):
        count_motifs(g, 2)
    with pytest.raises(ValueError):
        count_motifs(g, 3, workers=0)


def test_edgeless_graph_gives_empty_histogram():
    g = DirectedGraph(6, [])
    assert count_motifs(g, 4).counts == {}


def test_count_base_calls_equal_bases():
    g = bidirected_complete(12)
    h = count_motifs(g, 4)
    assert h.stats["count_base_calls"] == h.stats["bases"] == 66
    assert h.total == 495


def test_progress_hook():
    g = random_digraph(20, 0.2, 1)
    seen = []
    count_motifs(g, 4, chunk_size=5, progress=lambda done, total: seen.append((done, total)))
    assert seen[-1][0] == seen[-1][1] == len(enumerate_connected(g, 2))


def test_raw_counts_divide_exactly():
    g = random_digraph(18, 0.3, 2)
    for k in (3, 4, 5, 6):
        h = count_motifs(g, k)
        assert h.stats["division_violations"] == 0
        for motif, raw in h.stats["raw"].items():
            assert raw == h[motif] * pattern_multiplicity(motif)


def test_division_check_raises(monkeypatch):
    g = random_digraph(12, 0.3, 5)
    real = engine.multiplicities
    monkeypatch.setattr(engine, "multiplicities", lambda codes, k: real(codes, k) * 7)
    with pytest.raises(CountingError):
        count_motifs(g, 4)


@pytest.mark.parametrize("strategy", ["pairwise", "scan", "adaptive", "split"])
def test_strategies_give_same_histogram(strategy):
    g = random_digraph(22, 0.2, 8)
    assert count_motifs(g, 5, strategy=strategy).counts == brute_force_histogram(g, 5).counts


def test_worker_invariance():
    g = random_digraph(25, 0.2, 6)
    ref = count_motifs(g, 5)
    for w in (2, 4, 8):
        assert count_motifs(g, 5, workers=w, chunk_size=16).counts == ref.counts


@given(st.integers(3, 13), st.floats(0.05, 0.6), st.integers(0, 10**6), st.integers(3, 6))
def test_engine_equals_oracle(n, p, seed, k):
    g = random_digraph(n, p, seed)
    if k > n:
        return
    h = count_motifs(g, k)
    o = brute_force_histogram(g, k)
    assert h.counts == o.counts
    assert h.total == o.total
