"""Directed graph storage with per-vertex A/B/C neighbour classes.

For a vertex ``v`` and another vertex ``u``:

* ``u in A(v)``: both ``u -> v`` and ``v -> u`` exist (bidirected),
* ``u in B(v)``: only ``v -> u`` exists,
* ``u in C(v)``: only ``u -> v`` exists,
* otherwise ``u in N(v)``.

All adjacency is held in CSR arrays so the numba kernels can read it directly.
"""
from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from ._jit import njit

log = logging.getLogger(__name__)

# class codes stored alongside undirected neighbour lists; 0 is reserved for N
CLS_N = 0
CLS_A = 1
CLS_B = 2
CLS_C = 3


class ParseError(ValueError):
    """Raised for malformed edge-list input."""


@dataclass(frozen=True)
class DropCounts:
    self_loops: int = 0
    duplicates: int = 0


@njit
def _hash_slot(key, mask):
    return ((key * 0x7FEB352D) >> 15) & mask


@njit
def _build_edge_table(src, dst, n, table):
    mask = table.shape[0] - 1
    for e in range(src.shape[0]):
        key = src[e] * n + dst[e]
        h = _hash_slot(key, mask)
        while table[h] != -1:
            h = (h + 1) & mask
        table[h] = key


@njit
def edge_query(table, n, u, v):
    """True iff ``u -> v`` is an edge. Expected O(1) (linear probing)."""
    mask = table.shape[0] - 1
    key = u * n + v
    h = _hash_slot(key, mask)
    while True:
        t = table[h]
        if t == key:
            return True
        if t == -1:
            return False
        h = (h + 1) & mask


def _csr(keys: np.ndarray, vals: np.ndarray, n: int):
    order = np.lexsort((vals, keys))
    idx = vals[order].astype(np.int64)
    counts = np.bincount(keys, minlength=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, idx, order


class DirectedGraph:
    """Immutable simple digraph on vertices ``0..n-1``.

    ``edges`` keeps the load order of the directed edges; ``labels[i]`` is the
    original identifier of internal vertex ``i``.
    """

    def __init__(self, n: int, edges: np.ndarray, labels: Iterable | None = None):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValueError("negative vertex count")
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValueError("self-loops are not allowed")
        keys = edges[:, 0] * max(n, 1) + edges[:, 1]
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate directed edges")

        self.n = int(n)
        self.m = int(edges.shape[0])
        self.edges = edges
        self.edges.setflags(write=False)
        self.labels = list(range(n)) if labels is None else list(labels)

        src, dst = edges[:, 0], edges[:, 1]
        self.out_ptr, self.out_idx, _ = _csr(src, dst, n)
        self.in_ptr, self.in_idx, _ = _csr(dst, src, n)

        # undirected view: each neighbour once, tagged with its class
        rev = np.zeros(self.m, dtype=bool)
        if self.m:
            rev_keys = dst * n + src
            rev = np.isin(rev_keys, keys)
        a_src = np.concatenate([src, dst[~rev]])
        a_dst = np.concatenate([dst, src[~rev]])
        a_cls = np.concatenate(
            [np.where(rev, CLS_A, CLS_B), np.full(int((~rev).sum()), CLS_C)]
        ).astype(np.int64)
        self.nb_ptr, self.nb_idx, order = _csr(a_src, a_dst, n)
        self.nb_cls = a_cls[order]
        self.n_bidirected_pairs = int(rev.sum()) // 2

        size = 8
        while size < 2 * max(self.m, 1):
            size *= 2
        self.edge_table = np.full(size, -1, dtype=np.int64)
        _build_edge_table(src.copy(), dst.copy(), max(n, 1), self.edge_table)

        for arr in (self.out_ptr, self.out_idx, self.in_ptr, self.in_idx,
                    self.nb_ptr, self.nb_idx, self.nb_cls, self.edge_table):
            arr.setflags(write=False)
        self._out_sets: list[frozenset] | None = None

    # -- sizes -------------------------------------------------------------
    @property
    def m_pairs(self) -> int:
        """Adjacent unordered vertex pairs (a bidirected pair counts once)."""
        return self.m - self.n_bidirected_pairs

    @property
    def degrees(self) -> np.ndarray:
        """``d(v) = |A(v)| + |B(v)| + |C(v)|`` for every vertex."""
        return np.diff(self.nb_ptr)

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self.nb_ptr[v + 1] - self.nb_ptr[v])

    # -- adjacency ---------------------------------------------------------
    def out_adj(self, v: int) -> np.ndarray:
        self._check(v)
        return self.out_idx[self.out_ptr[v]:self.out_ptr[v + 1]]

    def in_adj(self, v: int) -> np.ndarray:
        self._check(v)
        return self.in_idx[self.in_ptr[v]:self.in_ptr[v + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        """delta(v), sorted ascending."""
        self._check(v)
        return self.nb_idx[self.nb_ptr[v]:self.nb_ptr[v + 1]]

    def _class(self, v: int, cls: int) -> frozenset:
        self._check(v)
        lo, hi = self.nb_ptr[v], self.nb_ptr[v + 1]
        sel = self.nb_cls[lo:hi] == cls
        return frozenset(int(u) for u in self.nb_idx[lo:hi][sel])

    def class_A(self, v: int) -> frozenset:
        return self._class(v, CLS_A)

    def class_B(self, v: int) -> frozenset:
        return self._class(v, CLS_B)

    def class_C(self, v: int) -> frozenset:
        return self._class(v, CLS_C)

    def relation(self, u: int, v: int) -> str:
        """Class letter of ``u`` relative to ``v``."""
        fwd, bwd = self.has_edge(v, u), self.has_edge(u, v)
        if fwd and bwd:
            return "A"
        if fwd:
            return "B"
        if bwd:
            return "C"
        return "N"

    def has_edge(self, u: int, v: int) -> bool:
        if self._out_sets is None:
            self._out_sets = [frozenset(self.out_adj(w).tolist()) for w in range(self.n)]
        self._check(u)
        return v in self._out_sets[u]

    def _check(self, v) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")

    # -- io ----------------------------------------------------------------
    def to_edge_list(self) -> str:
        lines = [f"# n={self.n} m={self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges.tolist())
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None) -> "DirectedGraph":
        """Build from integer pairs already in ``0..n-1``; loops and repeats are dropped."""
        seen = set()
        kept = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v or (u, v) in seen:
                continue
            seen.add((u, v))
            kept.append((u, v))
        if n is None:
            n = 1 + max((max(e) for e in kept), default=-1)
        return cls(n, np.array(kept, dtype=np.int64).reshape(-1, 2))


TextSource = Union[str, bytes, io.IOBase]


def parse_edge_list(text: TextSource) -> tuple[DirectedGraph, DropCounts]:
    """Parse a whitespace separated ``u v`` edge list.

    Lines starting with ``#`` or ``%`` are comments. Vertex ids are remapped to
    ``0..n-1`` in order of first appearance; self-loops and repeated directed
    edges are dropped and reported in the returned :class:`DropCounts`.
    """
    if isinstance(text, bytes):
        text = text.decode()
    if not isinstance(text, str):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode()

    ids: dict[int, int] = {}
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    loops = dups = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 2 integer tokens, got {len(parts)}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: malformed token in {s!r}") from None
        if a == b:
            loops += 1
            continue
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if (u, v) in seen:
            dups += 1
            continue
        seen.add((u, v))
        edges.append((u, v))
    if not edges:
        raise ParseError("no edges")
    if loops or dups:
        log.warning("dropped %d self-loop(s) and %d duplicate edge(s)", loops, dups)
    labels = sorted(ids, key=ids.__getitem__)
    g = DirectedGraph(len(ids), np.array(edges, dtype=np.int64), labels)
    return g, DropCounts(loops, dups)


def load_edge_list(path: str | os.PathLike) -> tuple[DirectedGraph, DropCounts]:
    with open(path, "rb") as fh:
        return parse_edge_list(fh.read())


def degree_sum(g: DirectedGraph, vertices: Iterable[int]) -> int:
    """D(S): sum of d(v) over ``vertices``."""
    total = 0
    deg = g.degrees
    for v in vertices:
        g._check(v)
        total += int(deg[v])
    return total
