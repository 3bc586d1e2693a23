"""Edges of an induced subgraph G[S] under four extraction strategies.

Every kernel reports each adjacent unordered pair of S exactly once together
with the class of the second vertex relative to the first (A, B or C), which
is what the counting engine consumes; :func:`induced_edges` expands that into
directed edges.

Work counters: ``counters[0]`` edge queries, ``counters[1]`` membership tests.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._jit import njit
from .graph import CLS_A, CLS_B, CLS_C, DirectedGraph, edge_query


class Strategy(enum.IntEnum):
    PAIRWISE = 0
    SCAN = 1
    ADAPTIVE = 2
    SPLIT = 3

    @classmethod
    def parse(cls, name) -> "Strategy":
        if isinstance(name, Strategy):
            return name
        aliases = {"pairwise": cls.PAIRWISE, "scan": cls.SCAN, "neighborscan": cls.SCAN,
                   "adaptive": cls.ADAPTIVE, "split": cls.SPLIT}
        try:
            return aliases[str(name).lower()]
        except KeyError:
            raise ValueError(f"unknown strategy {name!r}") from None


@dataclass(frozen=True)
class CelebritySplit:
    p: int
    s1: tuple
    s2: tuple
    objective: int


@njit
def _rel(table, n, u, v):
    fwd = edge_query(table, n, u, v)
    bwd = edge_query(table, n, v, u)
    if fwd and bwd:
        return 1
    if fwd:
        return 2
    if bwd:
        return 3
    return 0


@njit
def _pairwise(S, lo, hi, table, n, out_u, out_v, out_c, k0, counters):
    k = k0
    for i in range(lo, hi):
        u = S[i]
        for j in range(i + 1, hi):
            v = S[j]
            r = _rel(table, n, u, v)
            if r:
                out_u[k] = u
                out_v[k] = v
                out_c[k] = r
                k += 1
    m = hi - lo
    counters[0] += m * (m - 1)
    return k


@njit
def _scan(S, nb_ptr, nb_idx, nb_cls, mark, out_u, out_v, out_c, counters):
    """Scan delta(u) for u in S; ``mark[v] != 0`` means v in S."""
    k = 0
    tests = 0
    for i in range(S.shape[0]):
        u = S[i]
        for e in range(nb_ptr[u], nb_ptr[u + 1]):
            v = nb_idx[e]
            tests += 1
            if mark[v] and v > u:
                out_u[k] = u
                out_v[k] = v
                out_c[k] = nb_cls[e]
                k += 1
    counters[1] += tests
    return k


@njit
def split_index(degs):
    """Minimiser of prefix(p) + (len-p)**2 over sorted ``degs``; ties -> smaller p."""
    s = degs.shape[0]
    best_p = 0
    best = s * s
    acc = 0
    for p in range(1, s + 1):
        acc += degs[p - 1]
        val = acc + (s - p) * (s - p)
        if val < best:
            best = val
            best_p = p
    return best_p, best


@njit
def _split(S, degree, nb_ptr, nb_idx, nb_cls, table, n, mark, out_u, out_v, out_c, counters):
    s = S.shape[0]
    order = np.argsort(degree[S], kind="mergesort")
    srt = S[order]
    p, _ = split_index(degree[srt])
    # S2 (high degree): pairwise; mark them 2 while S1 scans
    for i in range(p, s):
        mark[srt[i]] = 2
    k = _pairwise(srt, p, s, table, n, out_u, out_v, out_c, 0, counters)
    tests = 0
    for i in range(p):
        u = srt[i]
        for e in range(nb_ptr[u], nb_ptr[u + 1]):
            v = nb_idx[e]
            tests += 1
            mv = mark[v]
            if mv == 2 or (mv == 1 and v > u):
                out_u[k] = u
                out_v[k] = v
                out_c[k] = nb_cls[e]
                k += 1
    counters[1] += tests
    for i in range(p, s):
        mark[srt[i]] = 1
    return k


@njit
def induced_pairs(S, strategy, dsum, degree, nb_ptr, nb_idx, nb_cls, table, n, mark,
                  out_u, out_v, out_c, counters, c_scan):
    """Adjacent pairs of G[S]; ``mark`` must be 1 on S and 0 elsewhere.

    Returns the number of pairs written.  ``(out_u[i], out_v[i])`` carries the
    class ``out_c[i]`` of ``out_v[i]`` relative to ``out_u[i]``.
    """
    s = S.shape[0]
    if strategy == 2:
        strategy = 0 if s * s < c_scan * dsum else 1
    if strategy == 0:
        return _pairwise(S, 0, s, table, n, out_u, out_v, out_c, 0, counters)
    if strategy == 1:
        return _scan(S, nb_ptr, nb_idx, nb_cls, mark, out_u, out_v, out_c, counters)
    return _split(S, degree, nb_ptr, nb_idx, nb_cls, table, n, mark, out_u, out_v, out_c,
                  counters)


class Scratch:
    """Per-worker reusable buffers; the mark array is all-zero between calls."""

    def __init__(self, g: DirectedGraph):
        self.mark = np.zeros(max(g.n, 1), dtype=np.int8)
        cap = g.m_pairs + 1
        self.out_u = np.empty(cap, dtype=np.int64)
        self.out_v = np.empty(cap, dtype=np.int64)
        self.out_c = np.empty(cap, dtype=np.int64)
        self.counters = np.zeros(2, dtype=np.int64)


def _as_vertex_array(g: DirectedGraph, S: Iterable[int]) -> np.ndarray:
    arr = np.asarray(sorted(set(int(v) for v in S)), dtype=np.int64)
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        bad = arr[0] if arr[0] < 0 else arr[-1]
        raise IndexError(f"vertex {bad} out of range [0, {g.n})")
    return arr


def induced_pair_list(g: DirectedGraph, S: Iterable[int], strategy=Strategy.ADAPTIVE,
                      scratch: Scratch | None = None, c_scan: int = 1):
    """``[(u, v, cls), ...]`` for adjacent pairs in G[S] plus the work counters."""
    strategy = Strategy.parse(strategy)
    arr = _as_vertex_array(g, S)
    sc = scratch or Scratch(g)
    sc.counters[:] = 0
    deg = g.degrees
    dsum = int(deg[arr].sum()) if arr.size else 0
    sc.mark[arr] = 1
    try:
        cnt = induced_pairs(arr, int(strategy), dsum, deg, g.nb_ptr, g.nb_idx, g.nb_cls,
                            g.edge_table, max(g.n, 1), sc.mark, sc.out_u, sc.out_v, sc.out_c,
                            sc.counters, c_scan)
    finally:
        sc.mark[arr] = 0
    pairs = list(zip(sc.out_u[:cnt].tolist(), sc.out_v[:cnt].tolist(), sc.out_c[:cnt].tolist()))
    return pairs, {"edge_queries": int(sc.counters[0]), "membership_tests": int(sc.counters[1])}


def induced_edges(g: DirectedGraph, S: Iterable[int], strategy=Strategy.ADAPTIVE,
                  counters: dict | None = None, scratch: Scratch | None = None,
                  c_scan: int = 1) -> list[tuple[int, int]]:
    """Directed edges of G[S], sorted.

    ``counters`` (if given) is updated in place with ``edge_queries`` and
    ``membership_tests``.
    """
    pairs, work = induced_pair_list(g, S, strategy, scratch, c_scan)
    edges = []
    for u, v, c in pairs:
        if c == CLS_A or c == CLS_B:
            edges.append((u, v))
        if c == CLS_A or c == CLS_C:
            edges.append((v, u))
    if counters is not None:
        for key, val in work.items():
            counters[key] = counters.get(key, 0) + val
    edges.sort()
    return edges


def split_point(g: DirectedGraph, S: Iterable[int]) -> CelebritySplit:
    """Degree split minimising sum of the p smallest degrees + (|S| - p)**2."""
    arr = _as_vertex_array(g, S)
    if arr.size == 0:
        raise ValueError("split_point needs a non-empty vertex set")
    deg = g.degrees
    order = np.argsort(deg[arr], kind="mergesort")
    srt = arr[order]
    p, obj = split_index(deg[srt])
    return CelebritySplit(int(p), tuple(srt[:p].tolist()), tuple(srt[p:].tolist()), int(obj))
