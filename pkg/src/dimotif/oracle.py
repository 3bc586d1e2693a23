"""Brute-force motif histogram for cross-checking the counting engine.

Connected k-sets are generated by include/exclude branching on a frontier
rooted at each set's smallest vertex, every induced subgraph is encoded
directly and classified through a fresh :class:`IsoCache`.  Nothing here is
shared with the engine or the ESU enumerator.
"""
from __future__ import annotations

import numpy as np

from . import isomorph as iso
from ._jit import njit
from .histogram import Histogram
from .graph import DirectedGraph, edge_query
from .isomorph import MotifId


@njit
def _emit(k, members, table, n, out, found):
    if found < out.shape[0]:
        code = 0
        for i in range(k):
            for j in range(k):
                if i != j and edge_query(table, n, members[i], members[j]):
                    code |= 1 << (i * (k - 1) + j - (1 if j > i else 0))
        out[found] = code
    return found + 1


@njit
def connected_set_codes(k, nb_ptr, nb_idx, table, n, out):
    """Adjacency codes of all connected k-sets; returns the total (may exceed ``out``).

    Depth-first include/exclude on the frontier element on top of ``cand``.
    status: 0 unseen, 1 member, 2 frontier, 3 excluded.
    """
    status = np.zeros(n, dtype=np.int64)
    members = np.zeros(k, dtype=np.int64)
    cand = np.zeros(n, dtype=np.int64)
    depth = n + k + 2
    f_slen = np.zeros(depth, dtype=np.int64)
    f_clen = np.zeros(depth, dtype=np.int64)
    f_u = np.zeros(depth, dtype=np.int64)
    f_pushed = np.zeros(depth, dtype=np.int64)
    f_phase = np.zeros(depth, dtype=np.int64)
    found = 0
    for v in range(n):
        status[v] = 1
        members[0] = v
        c0 = 0
        for e in range(nb_ptr[v], nb_ptr[v + 1]):
            w = nb_idx[e]
            if w > v:
                status[w] = 2
                cand[c0] = w
                c0 += 1
        sp = 0
        f_slen[0] = 1
        f_clen[0] = c0
        f_phase[0] = 0
        while sp >= 0:
            ph = f_phase[sp]
            if ph == 0:
                s_len = f_slen[sp]
                c_len = f_clen[sp]
                if s_len == k:
                    found = _emit(k, members, table, n, out, found)
                    sp -= 1
                    continue
                if c_len == 0:
                    sp -= 1
                    continue
                u = cand[c_len - 1]
                c_len -= 1
                f_u[sp] = u
                f_clen[sp] = c_len
                status[u] = 1
                members[s_len] = u
                pushed = 0
                for e in range(nb_ptr[u], nb_ptr[u + 1]):
                    w = nb_idx[e]
                    if w > v and status[w] == 0:
                        status[w] = 2
                        cand[c_len + pushed] = w
                        pushed += 1
                f_pushed[sp] = pushed
                f_phase[sp] = 1
                sp += 1
                f_slen[sp] = s_len + 1
                f_clen[sp] = c_len + pushed
                f_phase[sp] = 0
            elif ph == 1:
                c_len = f_clen[sp]
                for t in range(f_pushed[sp]):
                    status[cand[c_len + t]] = 0
                status[f_u[sp]] = 3
                f_phase[sp] = 2
                s_len = f_slen[sp]
                sp += 1
                f_slen[sp] = s_len
                f_clen[sp] = c_len
                f_phase[sp] = 0
            else:
                u = f_u[sp]
                status[u] = 2
                cand[f_clen[sp]] = u
                sp -= 1
        for t in range(c0):
            status[cand[t]] = 0
        status[v] = 0
    return found


def subgraph_codes(g: DirectedGraph, k: int) -> np.ndarray:
    out = np.empty(1 << 12, dtype=np.int64)
    found = connected_set_codes(k, g.nb_ptr, g.nb_idx, g.edge_table, g.n, out)
    if found > out.shape[0]:
        out = np.empty(found, dtype=np.int64)
        connected_set_codes(k, g.nb_ptr, g.nb_idx, g.edge_table, g.n, out)
    return out[:found]


def brute_force_histogram(g: DirectedGraph, k: int, cache: iso.IsoCache | None = None) -> Histogram:
    if not 3 <= k <= iso.MAX_K:
        raise ValueError(f"k must be in [3, {iso.MAX_K}], got {k}")
    if k > g.n:
        raise ValueError(f"k={k} exceeds the number of vertices n={g.n}")
    cache = iso.IsoCache() if cache is None else cache
    codes = subgraph_codes(g, k)
    mins = cache.lookup_many(k, codes)
    ids, counts = np.unique(mins, return_counts=True)
    hist = Histogram(k, {MotifId(k, int(m)): int(c) for m, c in zip(ids.tolist(), counts.tolist())})
    hist.stats = {"subgraphs": int(codes.size), "cache": cache.stats()}
    return hist
