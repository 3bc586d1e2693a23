"""Bit-packed adjacency codes for digraphs on at most 6 vertices.

Layout: for an ordered vertex list ``u_0..u_{k-1}`` the edge ``u_i -> u_j`` is
bit ``i*(k-1) + j - (j > i)``, so a 6-vertex digraph fits in 30 bits.

Two canonical forms live here:

* the *motif id*: the numerically smallest code over all ``k!`` relabelings.
  This is the public identifier.
* the *fast form*: smallest code over the relabelings compatible with a
  colour-refinement ordering.  It is also an isomorphism invariant but usually
  needs a single relabeling, so the counting kernels key on it and translate
  to motif ids once per class at the end.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._jit import njit

MAX_K = 6


def bit_index(i: int, j: int, k: int) -> int:
    return i * (k - 1) + j - (1 if j > i else 0)


@dataclass(frozen=True, order=True)
class AdjacencyCode:
    k: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise ValueError(f"code size must be in [1, {MAX_K}], got {self.k}")
        if not 0 <= self.bits < (1 << (self.k * (self.k - 1))):
            raise ValueError(f"bits {self.bits} out of range for k={self.k}")

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.bits >> bit_index(i, j, self.k)) & 1)


@dataclass(frozen=True, order=True)
class MotifId:
    """Canonical (minimum) code of an isomorphism class."""

    k: int
    bits: int

    def __str__(self) -> str:
        width = max(1, (self.k * (self.k - 1) + 3) // 4)
        return f"{self.k}:{self.bits:0{width}x}"

    @classmethod
    def parse(cls, text: str) -> "MotifId":
        k, _, h = text.partition(":")
        return cls(int(k), int(h, 16))

    @property
    def code(self) -> AdjacencyCode:
        return AdjacencyCode(self.k, self.bits)

    @property
    def n_edges(self) -> int:
        return bin(self.bits).count("1")

    def matrix(self) -> str:
        """Adjacency matrix rows, e.g. ``'011/001/000'``."""
        rows = []
        for i in range(self.k):
            rows.append("".join(
                "0" if i == j else str(int(self.code.has_edge(i, j))) for j in range(self.k)
            ))
        return "/".join(rows)


# ---------------------------------------------------------------------------
# lookup tables


def _build_tables():
    all_perm_ptr = np.zeros(MAX_K + 2, dtype=np.int64)
    chunks = []
    for k in range(1, MAX_K + 1):
        p = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
        pad = np.zeros((p.shape[0], MAX_K), dtype=np.int64)
        pad[:, :k] = p
        chunks.append(pad)
        all_perm_ptr[k + 1] = all_perm_ptr[k] + p.shape[0]
    all_perms = np.concatenate(chunks)

    # positions sorted by bit index, most significant first
    pair_i = np.zeros((MAX_K + 1, MAX_K * (MAX_K - 1)), dtype=np.int64)
    pair_j = np.zeros_like(pair_i)
    for k in range(2, MAX_K + 1):
        pairs = sorted(((i, j) for i in range(k) for j in range(k) if i != j),
                       key=lambda ij: -bit_index(ij[0], ij[1], k))
        for t, (i, j) in enumerate(pairs):
            pair_i[k, t] = i
            pair_j[k, t] = j

    # block-preserving permutations for every split of 0..k-1 into runs
    blk_ptr = np.zeros((MAX_K + 1, (1 << (MAX_K - 1)) + 1), dtype=np.int64)
    rows = []
    total = 0
    for k in range(1, MAX_K + 1):
        for mask in range(1 << (k - 1)):
            blk_ptr[k, mask] = total
            cuts = [0] + [b + 1 for b in range(k - 1) if mask >> b & 1] + [k]
            blocks = [list(range(cuts[t], cuts[t + 1])) for t in range(len(cuts) - 1)]
            for combo in itertools.product(*(itertools.permutations(b) for b in blocks)):
                row = [0] * MAX_K
                flat = [x for part in combo for x in part]
                row[:k] = flat
                rows.append(row)
                total += 1
        blk_ptr[k, 1 << (k - 1)] = total
    blk_perms = np.array(rows, dtype=np.int64)

    pow6 = np.array([6 ** e for e in range(3 * MAX_K)], dtype=np.int64)
    return all_perms, all_perm_ptr, pair_i, pair_j, blk_perms, blk_ptr, pow6


ALL_PERMS, ALL_PERM_PTR, PAIR_I, PAIR_J, BLK_PERMS, BLK_PTR, POW6 = _build_tables()


# ---------------------------------------------------------------------------
# kernels


@njit
def _bit(code, k, a, b):
    if b > a:
        return (code >> (a * (k - 1) + b - 1)) & 1
    return (code >> (a * (k - 1) + b)) & 1


@njit
def _relabeled_min(code, k, perms, lo, hi, order, pair_i, pair_j, best, min_last_out, outdeg):
    """Smallest code over ``order[perm[.]]`` for perm rows ``lo..hi``.

    ``best`` is a known upper bound.  When ``min_last_out >= 0`` only
    relabelings ending in a vertex of that out-degree are tried.
    """
    npairs = k * (k - 1)
    for p in range(lo, hi):
        if min_last_out >= 0 and outdeg[order[perms[p, k - 1]]] != min_last_out:
            continue
        val = 0
        state = 0  # 0: equal prefix, 1: already smaller, 2: larger -> abandon
        for t in range(npairs):
            a = order[perms[p, pair_i[k, t]]]
            b = order[perms[p, pair_j[k, t]]]
            bit = _bit(code, k, a, b)
            pos = npairs - 1 - t
            if state == 0:
                bb = (best >> pos) & 1
                if bit > bb:
                    state = 2
                    break
                if bit < bb:
                    state = 1
            val |= bit << pos
        if state == 1:
            best = val
    return best


@njit
def min_code_scan(code, k, all_perms, all_perm_ptr, pair_i, pair_j):
    """Reference: smallest code by scanning all k! relabelings.

    The last position holds the most significant row, whose smallest value
    is ``2**d - 1`` for the minimum out-degree ``d``; only relabelings ending in
    a minimum out-degree vertex can reach it, so the rest are skipped.
    """
    if k <= 1:
        return 0
    outdeg = np.zeros(k, dtype=np.int64)
    order = np.arange(k)
    dmin = k
    for a in range(k):
        d = 0
        for b in range(k):
            if a != b:
                d += _bit(code, k, a, b)
        outdeg[a] = d
        if d < dmin:
            dmin = d
    return _relabeled_min(code, k, all_perms, all_perm_ptr[k], all_perm_ptr[k + 1],
                          order, pair_i, pair_j, code, dmin, outdeg)


@njit
def _row_value(code, k, x, p, s, seq, st):
    """Smallest row ``p`` for vertex ``x`` placed at ``p``: out-neighbours go low in every cell."""
    r = 0
    for j in range(p + 1, k):
        r |= _bit(code, k, x, seq[j]) << (j - 1)
    j = 0
    while j <= p:
        cs = st[j]
        ce = j
        if cs == s:
            ce = p
        else:
            while ce + 1 < s and st[ce + 1] == cs:
                ce += 1
        c = 0
        for t in range(cs, ce + 1):
            y = seq[t]
            if y != x:
                c += _bit(code, k, x, y)
        for t in range(cs, cs + c):
            r |= 1 << t
        j = ce + 1
    return r


@njit
def _bb_level(code, k, p, seqs, starts, rows, rowmin, nprefix, prefix, best):
    """Evaluate candidates for position p; return False when the level is pruned."""
    seq = seqs[p]
    st = starts[p]
    s = st[p]
    low = 1 << (k - 1)
    for ci in range(s, p + 1):
        r = _row_value(code, k, seq[ci], p, s, seq, st)
        rows[p, ci] = r
        if r < low:
            low = r
    shift = p * (k - 1)
    rowmin[p] = low
    nprefix[p] = prefix | (low << shift)
    return (nprefix[p] >> shift) <= (best >> shift)


@njit
def _bb_descend(code, k, p, ci, seqs, starts):
    """Place seqs[p][ci] at position p and split the cells below for level p-1."""
    seq = seqs[p]
    st = starts[p]
    s = st[p]
    nseq = seqs[p - 1]
    nst = starts[p - 1]
    x = seq[ci]
    for t in range(k):
        nseq[t] = seq[t]
    nseq[ci] = seq[p]
    nseq[p] = x
    # out-neighbours of x move to the low end of every cell (stable)
    j = 0
    while j < p:
        cs = st[j]
        ce = j
        if cs == s:
            ce = p - 1
        else:
            while ce + 1 < s and st[ce + 1] == cs:
                ce += 1
        w = cs
        for t in range(cs, ce + 1):
            y = nseq[t]
            if _bit(code, k, x, y):
                u = t
                while u > w:
                    nseq[u] = nseq[u - 1]
                    u -= 1
                nseq[w] = y
                w += 1
        for t in range(cs, ce + 1):
            nst[t] = cs if (t < w or w == cs) else w
        j = ce + 1


@njit
def min_code(code, k):
    """Numerically smallest code over all k! relabelings.

    Positions are filled from the most significant row down.  Placing vertex
    x at the top free position fixes that row once x's out-neighbours sit at
    the low end of every remaining cell, so each level keeps only the
    candidates whose row is minimal and splits the cells accordingly.
    """
    if k <= 1:
        return 0
    seqs = np.zeros((k, k), dtype=np.int64)
    starts = np.zeros((k, k), dtype=np.int64)
    rows = np.zeros((k, k), dtype=np.int64)
    rowmin = np.zeros(k, dtype=np.int64)
    nprefix = np.zeros(k, dtype=np.int64)
    cursor = np.zeros(k, dtype=np.int64)
    for t in range(k):
        seqs[k - 1, t] = t
    best = 1 << (k * (k - 1))
    p = k - 1
    if not _bb_level(code, k, p, seqs, starts, rows, rowmin, nprefix, 0, best):
        return best
    cursor[p] = starts[p, p]
    while p < k:
        if p == 0:
            if nprefix[0] < best:
                best = nprefix[0]
            p += 1
            continue
        ci = cursor[p]
        while ci <= p and rows[p, ci] != rowmin[p]:
            ci += 1
        if ci > p:
            p += 1
            continue
        cursor[p] = ci + 1
        _bb_descend(code, k, p, ci, seqs, starts)
        if _bb_level(code, k, p - 1, seqs, starts, rows, rowmin, nprefix, nprefix[p], best):
            p -= 1
            cursor[p] = starts[p, p]
    return best


@njit
def fast_form(code, k, blk_perms, blk_ptr, pair_i, pair_j, pow6):
    """Isomorphism-invariant code via colour refinement plus in-block relabeling."""
    scratch = np.zeros((4, MAX_K), dtype=np.int64)
    return _fast_form(code, k, blk_perms, blk_ptr, pair_i, pair_j, pow6, scratch)


@njit
def _fast_form(code, k, blk_perms, blk_ptr, pair_i, pair_j, pow6, scratch):
    if k <= 1:
        return 0
    color = scratch[0]
    sig = scratch[1]
    order = scratch[2]
    newcol = scratch[3]
    color[:] = 0
    ncol = 1
    while True:
        for v in range(k):
            s = 0
            for u in range(k):
                if u != v:
                    rel = _bit(code, k, v, u) + 2 * _bit(code, k, u, v)
                    if rel > 0:
                        s += pow6[(rel - 1) * k + color[u]]
            sig[v] = s
        # insertion sort by (color, sig)
        for i in range(k):
            order[i] = i
        for i in range(1, k):
            x = order[i]
            j = i - 1
            while j >= 0 and (color[order[j]] > color[x] or
                              (color[order[j]] == color[x] and sig[order[j]] > sig[x])):
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = x
        c = 0
        for i in range(1, k):
            a = order[i - 1]
            b = order[i]
            if color[a] != color[b] or sig[a] != sig[b]:
                c += 1
            newcol[b] = c
        newcol[order[0]] = 0
        for i in range(k):
            color[i] = newcol[i]
        if c + 1 == ncol or c + 1 == k:
            ncol = c + 1
            break
        ncol = c + 1
    mask = 0
    for i in range(1, k):
        if color[order[i]] != color[order[i - 1]]:
            mask |= 1 << (i - 1)
    lo = blk_ptr[k, mask]
    hi = blk_ptr[k, mask + 1]
    # all-ones is the largest code, so it is a valid starting bound
    big = (1 << (k * (k - 1))) - 1
    return _relabeled_min(code, k, blk_perms, lo, hi, order, pair_i, pair_j, big, -1, sig)


@njit
def fast_forms_many(codes, k, blk_perms, blk_ptr, pair_i, pair_j, pow6):
    out = np.empty(codes.shape[0], dtype=np.int64)
    scratch = np.zeros((4, MAX_K), dtype=np.int64)
    for i in range(codes.shape[0]):
        out[i] = _fast_form(codes[i], k, blk_perms, blk_ptr, pair_i, pair_j, pow6, scratch)
    return out


@njit
def min_codes_many(codes, k):
    out = np.empty(codes.shape[0], dtype=np.int64)
    for i in range(codes.shape[0]):
        out[i] = min_code(codes[i], k)
    return out


@njit
def code_is_connected(code, k):
    if k <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for a in range(k):
            if (frontier >> a) & 1:
                for b in range(k):
                    if a != b and (_bit(code, k, a, b) or _bit(code, k, b, a)):
                        nxt |= 1 << b
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << k) - 1


@njit
def _byte_tables(k, all_perms, all_perm_ptr):
    """T[p, c, x]: contribution of byte ``x`` at byte slot ``c`` to the image under perm p."""
    lo = all_perm_ptr[k]
    nperm = all_perm_ptr[k + 1] - lo
    nbits = k * (k - 1)
    nchunk = (nbits + 7) // 8
    # source position (a, b) of every bit index, then its image index
    src_a = np.zeros(nbits, dtype=np.int64)
    src_b = np.zeros(nbits, dtype=np.int64)
    for a in range(k):
        for b in range(k):
            if a != b:
                t = a * (k - 1) + b - (1 if b > a else 0)
                src_a[t] = a
                src_b[t] = b
    tab = np.zeros((nperm, nchunk, 256), dtype=np.int64)
    inv = np.zeros(k, dtype=np.int64)
    for p in range(nperm):
        for i in range(k):
            inv[all_perms[lo + p, i]] = i
        for c in range(nchunk):
            for x in range(256):
                img = 0
                for s in range(8):
                    t = c * 8 + s
                    if t < nbits and (x >> s) & 1:
                        a = inv[src_a[t]]
                        b = inv[src_b[t]]
                        img |= 1 << (a * (k - 1) + b - (1 if b > a else 0))
                tab[p, c, x] = img
    return tab


@njit
def _census_kernel(k, tab, canon_out):
    """Orbit marking over all codes.  Returns (classes, connected classes).

    When ``canon_out`` has one slot per code it receives the minimum code of
    every orbit.
    """
    nbits = k * (k - 1)
    total = 1 << nbits
    nperm = tab.shape[0]
    nchunk = tab.shape[1]
    seen = np.zeros((total >> 6) + 1, dtype=np.uint64)
    fill = canon_out.shape[0] == total
    classes = 0
    connected = 0
    one = np.uint64(1)
    for c in range(total):
        if (seen[c >> 6] >> np.uint64(c & 63)) & one:
            continue
        # c is the smallest member of its orbit because all smaller codes are marked
        for p in range(nperm):
            img = 0
            for ch in range(nchunk):
                img |= tab[p, ch, (c >> (8 * ch)) & 255]
            seen[img >> 6] |= one << np.uint64(img & 63)
            if fill:
                canon_out[img] = c
        classes += 1
        if code_is_connected(c, k):
            connected += 1
    return classes, connected


# ---------------------------------------------------------------------------
# public API


def encode_adjacency(g, ordered: Sequence[int]) -> AdjacencyCode:
    """Adjacency code of ``g`` restricted to ``ordered`` (in that order)."""
    k = len(ordered)
    if k > MAX_K:
        raise ValueError(f"at most {MAX_K} vertices can be encoded, got {k}")
    if k < 1:
        raise ValueError("need at least one vertex")
    if len(set(ordered)) != k:
        raise ValueError("vertices must be distinct")
    bits = 0
    for i, u in enumerate(ordered):
        for j, v in enumerate(ordered):
            if i != j and g.has_edge(u, v):
                bits |= 1 << bit_index(i, j, k)
    return AdjacencyCode(k, bits)


def _as_code(code) -> AdjacencyCode:
    if isinstance(code, AdjacencyCode):
        return code
    if isinstance(code, MotifId):
        return code.code
    k, bits = code
    return AdjacencyCode(int(k), int(bits))


def canonical_code(code) -> MotifId:
    """Motif id (minimum code over all relabelings) of ``code``."""
    c = _as_code(code)
    return MotifId(c.k, int(min_code(c.bits, c.k)))


def fast_form_of(code) -> int:
    c = _as_code(code)
    return int(fast_form(c.bits, c.k, BLK_PERMS, BLK_PTR, PAIR_I, PAIR_J, POW6))


def is_connected(code) -> bool:
    c = _as_code(code)
    return bool(code_is_connected(c.bits, c.k))


def canonical_table(k: int) -> np.ndarray:
    """Minimum code for every one of the ``2**(k(k-1))`` codes (k <= 5)."""
    if not 1 <= k <= 5:
        raise ValueError("full tables are only built for k <= 5")
    tab = _byte_tables(k, ALL_PERMS, ALL_PERM_PTR)
    out = np.zeros(1 << (k * (k - 1)), dtype=np.int64)
    _census_kernel(k, tab, out)
    return out


class IsoCache:
    """Memo of code -> motif id with hit/miss counters.

    Values are pure functions of the key, so concurrent writers storing the
    same value are harmless.
    """

    def __init__(self, precompute: bool = False):
        self._map: dict[tuple[int, int], MotifId] = {}
        self._tables: dict[int, np.ndarray] = {}
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()
        if precompute:
            for k in range(1, 5):
                self._tables[k] = canonical_table(k)

    def __len__(self) -> int:
        return len(self._map)

    def lookup(self, code) -> MotifId:
        c = _as_code(code)
        tab = self._tables.get(c.k)
        if tab is not None:
            self.hits += 1
            return MotifId(c.k, int(tab[c.bits]))
        key = (c.k, c.bits)
        got = self._map.get(key)
        if got is not None:
            self.hits += 1
            return got
        self.misses += 1
        got = canonical_code(c)
        self._map[key] = got
        return got

    def lookup_many(self, k: int, codes: np.ndarray) -> np.ndarray:
        """Vectorised lookup returning minimum codes as an int64 array."""
        codes = np.asarray(codes, dtype=np.int64)
        uniq, inv = np.unique(codes, return_inverse=True)
        out = np.empty(uniq.shape[0], dtype=np.int64)
        todo = []
        for i, b in enumerate(uniq.tolist()):
            got = self._map.get((k, b))
            if got is None:
                todo.append(i)
            else:
                out[i] = got.bits
        self.hits += uniq.shape[0] - len(todo)
        self.misses += len(todo)
        if todo:
            idx = np.array(todo, dtype=np.int64)
            fresh = min_codes_many(uniq[idx], k)
            out[idx] = fresh
            for b, m in zip(uniq[idx].tolist(), fresh.tolist()):
                self._map[(k, b)] = MotifId(k, m)
        return out[inv.reshape(-1)]

    def stats(self) -> dict:
        return {"entries": len(self._map), "hits": self.hits, "misses": self.misses}


def iso_id(code, cache: IsoCache) -> MotifId:
    return cache.lookup(code)


# minimum code per (k, fast form); a pure memo shared by every counting run
_FORM_TO_MIN: dict[tuple[int, int], int] = {}
_FORM_LOCK = threading.Lock()


def forms_to_motif_bits(k: int, forms: np.ndarray) -> np.ndarray:
    forms = np.asarray(forms, dtype=np.int64)
    out = np.empty(forms.shape[0], dtype=np.int64)
    todo = []
    for i, f in enumerate(forms.tolist()):
        m = _FORM_TO_MIN.get((k, f))
        if m is None:
            todo.append(i)
        else:
            out[i] = m
    if todo:
        idx = np.array(todo, dtype=np.int64)
        fresh = min_codes_many(forms[idx], k)
        out[idx] = fresh
        with _FORM_LOCK:
            for f, m in zip(forms[idx].tolist(), fresh.tolist()):
                _FORM_TO_MIN[(k, f)] = m
    return out


def class_census(k: int, connected_only: bool = True, long_run: bool = False) -> int:
    """Number of isomorphism classes of k-vertex digraphs.

    k = 6 scans 2**30 codes and needs ``long_run=True``.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"census size must be in [1, {MAX_K}]")
    if k == MAX_K and not long_run:
        raise RuntimeError(
            "k=6 census enumerates 2**30 adjacency codes (128 MiB bitmap, long runtime); "
            "pass long_run=True / --long-run to proceed"
        )
    tab = _byte_tables(k, ALL_PERMS, ALL_PERM_PTR)
    classes, connected = _census_kernel(k, tab, np.zeros(0, dtype=np.int64))
    return int(connected if connected_only else classes)


@lru_cache(maxsize=None)
def motif_is_connected(motif: MotifId) -> bool:
    return bool(code_is_connected(motif.bits, motif.k))
