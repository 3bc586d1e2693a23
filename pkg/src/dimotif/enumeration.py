"""Connected induced vertex sets of size r (1 <= r <= 4) by ESU.

Each set is produced once: it is grown from its smallest vertex ``v`` and new
vertices enter the extension set only through the exclusive neighbourhood of
the vertex just added, restricted to ids greater than ``v``.  Connectivity
ignores edge direction.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np

from ._jit import njit
from .graph import DirectedGraph

MAX_R = 4


@njit
def _touch(nb_ptr, nb_idx, cnt, w, delta):
    cnt[w] += delta
    for e in range(nb_ptr[w], nb_ptr[w + 1]):
        cnt[nb_idx[e]] += delta


@njit
def esu_kernel(nb_ptr, nb_idx, n, r, root_lo, root_hi, out, cnt, ext, ext_len, sub):
    """Write sets rooted in ``[root_lo, root_hi)`` into ``out``; return how many exist.

    Rows beyond ``out.shape[0]`` are counted but not written, so a caller can
    size the buffer and retry.  ``cnt`` must be all-zero on entry and is left
    all-zero.
    """
    cap = out.shape[0]
    found = 0
    tmp = np.empty(r, dtype=np.int64)
    for v in range(root_lo, root_hi):
        sub[0] = v
        if r == 1:
            if found < cap:
                out[found, 0] = v
            found += 1
            continue
        _touch(nb_ptr, nb_idx, cnt, v, 1)
        ext_len[0] = 0
        for e in range(nb_ptr[v], nb_ptr[v + 1]):
            u = nb_idx[e]
            if u > v:
                ext[0, ext_len[0]] = u
                ext_len[0] += 1
        d = 0
        while d >= 0:
            if ext_len[d] == 0:
                _touch(nb_ptr, nb_idx, cnt, sub[d], -1)
                d -= 1
                continue
            ext_len[d] -= 1
            w = ext[d, ext_len[d]]
            ln = ext_len[d]
            for t in range(ln):
                ext[d + 1, t] = ext[d, t]
            for e in range(nb_ptr[w], nb_ptr[w + 1]):
                u = nb_idx[e]
                if u > v and cnt[u] == 0:
                    ext[d + 1, ln] = u
                    ln += 1
            ext_len[d + 1] = ln
            sub[d + 1] = w
            if d + 2 == r:
                if found < cap:
                    for t in range(r):
                        tmp[t] = sub[t]
                    tmp.sort()
                    for t in range(r):
                        out[found, t] = tmp[t]
                found += 1
            else:
                _touch(nb_ptr, nb_idx, cnt, w, 1)
                d += 1
    return found


class _Workspace:
    def __init__(self, n: int, r: int):
        self.cnt = np.zeros(max(n, 1), dtype=np.int64)
        self.ext = np.zeros((r, max(n, 1)), dtype=np.int64)
        self.ext_len = np.zeros(r, dtype=np.int64)
        self.sub = np.zeros(r, dtype=np.int64)


def _check_r(r: int) -> None:
    if not 1 <= r <= MAX_R:
        raise ValueError(f"r must be in [1, {MAX_R}], got {r}")


def _run(g: DirectedGraph, r: int, lo: int, hi: int, ws: _Workspace, guess: int) -> np.ndarray:
    out = np.empty((max(guess, 1), r), dtype=np.int64)
    found = esu_kernel(g.nb_ptr, g.nb_idx, g.n, r, lo, hi, out, ws.cnt, ws.ext, ws.ext_len, ws.sub)
    if found > out.shape[0]:
        out = np.empty((found, r), dtype=np.int64)
        esu_kernel(g.nb_ptr, g.nb_idx, g.n, r, lo, hi, out, ws.cnt, ws.ext, ws.ext_len, ws.sub)
    return out[:found]


def enumerate_connected(g: DirectedGraph, r: int) -> np.ndarray:
    """All connected r-sets as rows of sorted ids, rows in lexicographic order."""
    _check_r(r)
    ws = _Workspace(g.n, r)
    sets = _run(g, r, 0, g.n, ws, 4 * g.m + g.n)
    if sets.shape[0] > 1:
        sets = sets[np.lexsort(sets.T[::-1])]
    return sets


def iter_connected_chunks(g: DirectedGraph, r: int, roots_per_chunk: int = 64) -> Iterator[np.ndarray]:
    """Stream connected r-sets grouped by ranges of their smallest vertex."""
    _check_r(r)
    ws = _Workspace(g.n, r)
    for lo in range(0, g.n, roots_per_chunk):
        hi = min(g.n, lo + roots_per_chunk)
        chunk = _run(g, r, lo, hi, ws, 1024)
        if chunk.shape[0]:
            yield chunk
