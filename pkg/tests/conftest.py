import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dimotif import DirectedGraph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", max_examples=25, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


def random_digraph(n: int, p: float, seed: int) -> DirectedGraph:
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    return DirectedGraph(n, np.stack([src, dst], axis=1))


def bidirected_complete(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def directed_cycle(n: int) -> DirectedGraph:
    return DirectedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def paw() -> DirectedGraph:
    """Triangle 0-1-3 with pendant 2 on vertex 0 (directions arbitrary)."""
    return DirectedGraph(4, [(0, 1), (0, 2), (3, 0), (1, 3)])


def hub_graph(n: int, hubs: int = 3, seed: int = 0) -> DirectedGraph:
    """``hubs`` mutually bidirected hubs; every other vertex has degree 3."""
    rng = np.random.default_rng(seed)
    edges = set()
    for a, b in itertools.permutations(range(hubs), 2):
        edges.add((a, b))
    for i in range(hubs, n):
        h = i % hubs
        edges.add((i, h) if rng.random() < 0.5 else (h, i))
        edges.add((i, i + 1 if i + 1 < n else hubs))
    return DirectedGraph(n, sorted(edges))


def undirected_connected(g: DirectedGraph, verts) -> bool:
    verts = list(verts)
    if not verts:
        return False
    inside = set(verts)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v).tolist():
            if u in inside and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(inside)


def connected_subsets(g: DirectedGraph, r: int) -> set:
    """Every connected r-subset by filtering all C(n, r) subsets."""
    return {s for s in itertools.combinations(range(g.n), r) if undirected_connected(g, s)}


@pytest.fixture
def k4():
    return bidirected_complete(4)
