"""Size-k motif histogram from connected (k-2)-vertex base sets.

For a base X every vertex of adj(X) gets a label: one A/B/C/N letter per
vertex of X.  Two external vertices y, z with labels Y, Z and no edge between
them always induce the same k-vertex pattern, so unordered pairs of label
cells are counted in closed form (``C(|Y|, 2)`` or ``|Y||Z|``).  Pairs joined
by an edge are then moved from their edgeless pattern to the true one.

A connected k-set T is reached once for each split ``T = X + {y, z}`` with X
connected and y, z both adjacent to X; that number depends only on the pattern
of T, so raw counts are divided by it at the end.

Labels are base-4 integers, digit i = class relative to X[i]
(N=0, A=1, B=2, C=3).  X occupies code positions ``0..k-3``, the two external
vertices ``k-2`` and ``k-1``.
"""
from __future__ import annotations

import threading
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable, Sequence

import numpy as np

from . import isomorph as iso
from ._jit import int_dict, njit
from .enumeration import enumerate_connected
from .graph import DirectedGraph, edge_query
from .histogram import Histogram
from .induce import Strategy, induced_pairs
from .isomorph import MotifId, bit_index

LETTERS = "NABC"


class CountingError(RuntimeError):
    """A raw count was not divisible by its pattern multiplicity."""


# ---------------------------------------------------------------------------
# label tables


def _label_bits(k: int) -> np.ndarray:
    """tab[slot, label]: code bits linking external position ``k-2+slot`` to X."""
    r = k - 2
    tab = np.zeros((2, 4 ** r), dtype=np.int64)
    for slot in range(2):
        pos = r + slot
        for label in range(4 ** r):
            bits = 0
            for i in range(r):
                d = (label >> (2 * i)) & 3
                if d in (1, 2):  # A or B: X[i] -> ext
                    bits |= 1 << bit_index(i, pos, k)
                if d in (1, 3):  # A or C: ext -> X[i]
                    bits |= 1 << bit_index(pos, i, k)
            tab[slot, label] = bits
    return tab


def _pair_bits(k: int) -> np.ndarray:
    """Bits between the two external positions for class codes 0..3 (N, A, B, C)."""
    r = k - 2
    fwd = 1 << bit_index(r, r + 1, k)
    bwd = 1 << bit_index(r + 1, r, k)
    return np.array([0, fwd | bwd, fwd, bwd], dtype=np.int64)


def label_string(label: int, r: int) -> str:
    return "".join(LETTERS[(label >> (2 * i)) & 3] for i in range(r))


def label_value(text: str) -> int:
    val = 0
    for i, ch in enumerate(text):
        d = LETTERS.find(ch)
        if d < 0:
            raise ValueError(f"invalid class letter {ch!r} in label {text!r}")
        val |= d << (2 * i)
    return val


# ---------------------------------------------------------------------------
# canonical base order


@lru_cache(maxsize=None)
def base_tables(r: int):
    """Per r-vertex code: class index and a vertex order that makes the code minimal.

    Returns ``(cls_of_code, order_of_code, class_kcode)`` where
    ``order_of_code[c]`` lists old positions in their new order and
    ``class_kcode[cls]`` is the class's minimal code laid out in a
    (r+2)-vertex code (X at positions ``0..r-1``).
    """
    nbits = r * (r - 1)
    codes = np.arange(1 << nbits, dtype=np.int64)
    best = codes.copy()
    order = np.tile(np.arange(r, dtype=np.int64), (codes.size, 1))
    for perm in permutations(range(r)):
        # perm[new] = old
        relab = np.zeros_like(codes)
        for a in range(r):
            for b in range(r):
                if a != b:
                    old = bit_index(perm[a], perm[b], r)
                    relab |= ((codes >> old) & 1) << bit_index(a, b, r)
        better = relab < best
        best[better] = relab[better]
        order[better] = perm
    forms, cls = np.unique(best, return_inverse=True)
    k = r + 2
    kcode = np.zeros(forms.size, dtype=np.int64)
    for t, f in enumerate(forms.tolist()):
        for a in range(r):
            for b in range(r):
                if a != b and f >> bit_index(a, b, r) & 1:
                    kcode[t] |= 1 << bit_index(a, b, k)
    return cls.reshape(-1).astype(np.int64), order, kcode


@njit
def canonical_bases(bases, table, n, cls_of_code, order_of_code, out, cls_out):
    """Reorder every base row so that G[X] has its minimal code; record its class."""
    r = bases.shape[1]
    for b in range(bases.shape[0]):
        code = 0
        for i in range(r):
            for j in range(r):
                if i != j and edge_query(table, n, bases[b, i], bases[b, j]):
                    code |= 1 << (i * (r - 1) + j - (1 if j > i else 0))
        for i in range(r):
            out[b, i] = bases[b, order_of_code[code, i]]
        cls_out[b] = cls_of_code[code]


# ---------------------------------------------------------------------------
# kernel
#
# Raw counts are keyed compactly: ((cls * L + la) * L + lb) * 4 + e with
# L = 4**r, la <= lb the labels of the two external vertices and e the class
# of the lb vertex relative to the la vertex (0 when they are not adjacent).


@njit
def _flush(cls, span, acc, seen, touched, nt, raw):
    off = cls * span
    for t in range(nt):
        idx = touched[t]
        val = acc[idx]
        if val != 0:
            key = off + idx
            raw[key] = raw.get(key, 0) + val
            acc[idx] = 0
        seen[idx] = 0
    return 0


@njit
def count_bases(bases, base_cls, k, degree, nb_ptr, nb_idx, nb_cls, table, n,
                strategy, c_scan, raw, acc, seen, acc_touched, label_acc, touched,
                cell_cnt, cells, mark, out_u, out_v, out_c, counters):
    """Accumulate raw counts for canonically ordered bases (grouped by class)."""
    r = k - 2
    L = 4 ** r
    span = L * L * 4
    cur = -1
    na = 0
    for b in range(bases.shape[0]):
        cls = base_cls[b]
        if cls != cur:
            if cur >= 0:
                na = _flush(cur, span, acc, seen, acc_touched, na, raw)
            cur = cls
        for i in range(r):
            label_acc[bases[b, i]] = -1
        # labels of adj(X)
        nt = 0
        w = 1
        for i in range(r):
            xi = bases[b, i]
            for e in range(nb_ptr[xi], nb_ptr[xi + 1]):
                u = nb_idx[e]
                lab = label_acc[u]
                if lab < 0:
                    continue
                if lab == 0:
                    touched[nt] = u
                    nt += 1
                label_acc[u] = lab + nb_cls[e] * w
            w *= 4
        # cell sizes
        nc = 0
        dsum = 0
        for t in range(nt):
            u = touched[t]
            lab = label_acc[u]
            if cell_cnt[lab] == 0:
                cells[nc] = lab
                nc += 1
            cell_cnt[lab] += 1
            mark[u] = 1
            dsum += degree[u]
        # pair branch over unordered cell pairs
        for a in range(nc):
            la = cells[a]
            ca = cell_cnt[la]
            if ca > 1:
                idx = (la * L + la) * 4
                if not seen[idx]:
                    seen[idx] = 1
                    acc_touched[na] = idx
                    na += 1
                acc[idx] += ca * (ca - 1) // 2
            for c in range(a + 1, nc):
                lc = cells[c]
                if la < lc:
                    idx = (la * L + lc) * 4
                else:
                    idx = (lc * L + la) * 4
                if not seen[idx]:
                    seen[idx] = 1
                    acc_touched[na] = idx
                    na += 1
                acc[idx] += ca * cell_cnt[lc]
        # edges inside adj(X) move one unit each to the true pattern
        if nt > 1:
            npairs = induced_pairs(touched[:nt], strategy, dsum, degree, nb_ptr, nb_idx, nb_cls,
                                   table, n, mark, out_u, out_v, out_c, counters, c_scan)
            for t in range(npairs):
                lu = label_acc[out_u[t]]
                lv = label_acc[out_v[t]]
                e = out_c[t]
                if lu > lv:
                    lu, lv = lv, lu
                    if e == 2:
                        e = 3
                    elif e == 3:
                        e = 2
                idx = (lu * L + lv) * 4
                for d in (0, e):
                    if not seen[idx + d]:
                        seen[idx + d] = 1
                        acc_touched[na] = idx + d
                        na += 1
                acc[idx] -= 1
                acc[idx + e] += 1
        # reset scratch
        for t in range(nt):
            u = touched[t]
            cell_cnt[label_acc[u]] = 0
            label_acc[u] = 0
            mark[u] = 0
        for i in range(r):
            label_acc[bases[b, i]] = 0
    if cur >= 0:
        _flush(cur, span, acc, seen, acc_touched, na, raw)
    return bases.shape[0]


@njit
def raw_items(raw):
    keys = np.empty(len(raw), dtype=np.int64)
    vals = np.empty(len(raw), dtype=np.int64)
    i = 0
    for key, val in raw.items():
        keys[i] = key
        vals[i] = val
        i += 1
    return keys, vals


@njit
def memo_get(memo, keys, out):
    """Fill ``out`` from ``memo``; return indices of keys not present."""
    miss = np.empty(keys.shape[0], dtype=np.int64)
    nm = 0
    for i in range(keys.shape[0]):
        v = memo.get(keys[i], -1)
        out[i] = v
        if v < 0:
            miss[nm] = i
            nm += 1
    return miss[:nm]


@njit
def memo_put(memo, keys, vals):
    for i in range(keys.shape[0]):
        memo[keys[i]] = vals[i]


class _Worker:
    def __init__(self, g: DirectedGraph, k: int):
        n = max(g.n, 1)
        r = k - 2
        span = 16 ** r * 4
        self.raw = int_dict()
        self.acc = np.zeros(span, dtype=np.int64)
        self.seen = np.zeros(span, dtype=np.uint8)
        self.acc_touched = np.zeros(span, dtype=np.int64)
        self.label_acc = np.zeros(n, dtype=np.int64)
        self.touched = np.zeros(n, dtype=np.int64)
        self.cell_cnt = np.zeros(4 ** r, dtype=np.int64)
        self.cells = np.zeros(4 ** r, dtype=np.int64)
        self.mark = np.zeros(n, dtype=np.int8)
        cap = g.m_pairs + 1
        self.out_u = np.empty(cap, dtype=np.int64)
        self.out_v = np.empty(cap, dtype=np.int64)
        self.out_c = np.empty(cap, dtype=np.int64)
        self.counters = np.zeros(2, dtype=np.int64)
        self.bases_done = 0

    def run(self, g, k, bases, base_cls, strategy, c_scan):
        self.bases_done += count_bases(
            bases, base_cls, k, g.degrees, g.nb_ptr, g.nb_idx, g.nb_cls, g.edge_table,
            max(g.n, 1), int(strategy), c_scan, self.raw, self.acc, self.seen,
            self.acc_touched, self.label_acc, self.touched, self.cell_cnt, self.cells,
            self.mark, self.out_u, self.out_v, self.out_c, self.counters,
        )

    def items(self):
        return raw_items(self.raw)


def _prepare_bases(g: DirectedGraph, bases: np.ndarray):
    r = bases.shape[1]
    cls_of_code, order_of_code, _ = base_tables(r)
    out = np.empty_like(bases)
    cls = np.empty(bases.shape[0], dtype=np.int64)
    canonical_bases(bases, g.edge_table, max(g.n, 1), cls_of_code, order_of_code, out, cls)
    perm = np.argsort(cls, kind="stable")
    return out[perm], cls[perm]


def compact_to_codes(k: int, keys: np.ndarray) -> np.ndarray:
    """Expand compact raw-count keys into labelled k-vertex adjacency codes."""
    r = k - 2
    L = 4 ** r
    _, _, kcode = base_tables(r)
    lbits, pbits = _label_bits(k), _pair_bits(k)
    e = keys & 3
    rest = keys >> 2
    lb = rest % L
    rest //= L
    la = rest % L
    cls = rest // L
    return kcode[cls] | lbits[0, la] | lbits[1, lb] | pbits[e]


# compact key -> minimum code, per k; pure memo shared by every counting run
_KEY_MEMO: dict[int, object] = {}
_MEMO_LOCK = threading.Lock()
MEMO_LIMIT = 1 << 24


def _resolve(k: int, keys: np.ndarray) -> np.ndarray:
    with _MEMO_LOCK:
        memo = _KEY_MEMO.get(k)
        if memo is None or len(memo) > MEMO_LIMIT:
            memo = _KEY_MEMO[k] = int_dict()
        out = np.empty(keys.shape[0], dtype=np.int64)
        miss = memo_get(memo, keys, out)
        if miss.size:
            codes = compact_to_codes(k, keys[miss])
            forms = iso.fast_forms_many(codes, k, iso.BLK_PERMS, iso.BLK_PTR, iso.PAIR_I,
                                        iso.PAIR_J, iso.POW6)
            uniq, inv = np.unique(forms, return_inverse=True)
            mins = iso.forms_to_motif_bits(k, uniq)[inv.reshape(-1)]
            out[miss] = mins
            memo_put(memo, keys[miss], mins)
        info = {"entries": len(memo), "hits": int(keys.size - miss.size), "misses": int(miss.size)}
    return out, info


def _reduce_keys(k: int, keys: np.ndarray, vals: np.ndarray):
    """Compact raw counts -> (minimum codes, raw sums, memo stats), zero sums dropped."""
    if keys.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, {"entries": 0, "hits": 0, "misses": 0}
    mins, info = _resolve(k, keys)
    uniq, inv = np.unique(mins, return_inverse=True)
    sums = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(sums, inv.reshape(-1), vals)
    nz = sums != 0
    return uniq[nz], sums[nz], info


# ---------------------------------------------------------------------------
# multiplicity


def _undirected_masks(motif: MotifId) -> list[int]:
    k = motif.k
    code = motif.code
    masks = [0] * k
    for i in range(k):
        for j in range(k):
            if i != j and (code.has_edge(i, j) or code.has_edge(j, i)):
                masks[i] |= 1 << j
    return masks


def _connected_mask(masks: list[int], vertices: int) -> bool:
    if vertices == 0:
        return False
    start = vertices & -vertices
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        v = 0
        f = frontier
        while f:
            if f & 1:
                nxt |= masks[v]
            f >>= 1
            v += 1
        nxt &= vertices
        frontier = nxt & ~seen
        seen |= nxt
    return seen == vertices


@lru_cache(maxsize=None)
def pattern_multiplicity(motif: MotifId) -> int:
    """Number of unordered pairs {a, b} whose removal leaves a connected set that both touch."""
    k = motif.k
    if not 3 <= k <= iso.MAX_K:
        raise ValueError(f"pattern size must be in [3, {iso.MAX_K}]")
    masks = _undirected_masks(motif)
    full = (1 << k) - 1
    if not _connected_mask(masks, full):
        raise ValueError(f"pattern {motif} is not connected")
    count = 0
    for a, b in combinations(range(k), 2):
        rest = full & ~(1 << a) & ~(1 << b)
        if masks[a] & rest and masks[b] & rest and _connected_mask(masks, rest):
            count += 1
    return count


@njit
def _mask_connected(masks, vertices):
    if vertices == 0:
        return False
    seen = vertices & -vertices
    frontier = seen
    while frontier:
        nxt = 0
        for v in range(masks.shape[0]):
            if frontier >> v & 1:
                nxt |= masks[v]
        nxt &= vertices
        frontier = nxt & ~seen
        seen |= nxt
    return seen == vertices


@njit
def multiplicities(codes, k):
    """Vectorised :func:`pattern_multiplicity` over minimum codes (0 if disconnected)."""
    out = np.zeros(codes.shape[0], dtype=np.int64)
    masks = np.zeros(k, dtype=np.int64)
    full = (1 << k) - 1
    for t in range(codes.shape[0]):
        code = codes[t]
        masks[:] = 0
        for i in range(k):
            for j in range(k):
                if i != j and code >> (i * (k - 1) + j - (1 if j > i else 0)) & 1:
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        if not _mask_connected(masks, full):
            continue
        cnt = 0
        for a in range(k):
            for b in range(a + 1, k):
                rest = full & ~(1 << a) & ~(1 << b)
                if masks[a] & rest and masks[b] & rest and _mask_connected(masks, rest):
                    cnt += 1
        out[t] = cnt
    return out


# ---------------------------------------------------------------------------
# public operations


def _check_base(g: DirectedGraph, X: Sequence[int]) -> list[int]:
    X = [int(x) for x in X]
    if not 1 <= len(X) <= 4:
        raise ValueError(f"base set must have 1..4 vertices, got {len(X)}")
    if len(set(X)) != len(X):
        raise ValueError("base vertices must be distinct")
    for x in X:
        g._check(x)
    return X


def _base_connected(g: DirectedGraph, X: list[int]) -> bool:
    idx = {x: i for i, x in enumerate(X)}
    masks = [0] * len(X)
    for i, x in enumerate(X):
        for u in g.neighbors(x).tolist():
            j = idx.get(u)
            if j is not None:
                masks[i] |= 1 << j
    return _connected_mask(masks, (1 << len(X)) - 1)


def partition_adjacency(g: DirectedGraph, X: Sequence[int]) -> dict[str, list[int]]:
    """Cells of adj(X) keyed by label string; only non-empty cells are present."""
    X = _check_base(g, X)
    members = set(X)
    adj = set()
    for x in X:
        adj.update(g.neighbors(x).tolist())
    adj -= members
    cells: dict[str, list[int]] = {}
    for u in sorted(adj):
        label = "".join(g.relation(u, x) for x in X)
        cells.setdefault(label, []).append(u)
    return cells


def assemble_motif_code(g: DirectedGraph, X: Sequence[int], Y: str, Z: str) -> iso.AdjacencyCode:
    """Code of G[X] plus one synthetic vertex per label, with no edge between the two."""
    X = _check_base(g, X)
    r = len(X)
    k = r + 2
    for lab in (Y, Z):
        if len(lab) != r or any(ch not in LETTERS for ch in lab) or set(lab) == {"N"}:
            raise ValueError(f"invalid label {lab!r} for a base of size {r}")
    bits = 0
    for i, a in enumerate(X):
        for j, b in enumerate(X):
            if i != j and g.has_edge(a, b):
                bits |= 1 << bit_index(i, j, k)
    tab = _label_bits(k)
    bits |= int(tab[0, label_value(Y)]) | int(tab[1, label_value(Z)])
    return iso.AdjacencyCode(k, bits)


def count_base(g: DirectedGraph, X: Sequence[int], hist: Counter, cache: iso.IsoCache | None = None,
               strategy=Strategy.ADAPTIVE) -> None:
    """Add the raw (unnormalised) contribution of base X to ``hist`` (MotifId -> int)."""
    X = _check_base(g, X)
    if not _base_connected(g, X):
        raise ValueError(f"base {X} does not induce a connected subgraph")
    k = len(X) + 2
    w = _Worker(g, k)
    rows, cls = _prepare_bases(g, np.array([X], dtype=np.int64))
    w.run(g, k, rows, cls, Strategy.parse(strategy), 1)
    keys, vals = w.items()
    cache = cache if cache is not None else iso.IsoCache()
    for code, val in zip(compact_to_codes(k, keys).tolist(), vals.tolist()):
        if val:
            hist[cache.lookup((k, code))] += val


def count_motifs(g: DirectedGraph, k: int, workers: int = 1, strategy=Strategy.ADAPTIVE,
                 chunk_size: int = 256, c_scan: int = 1,
                 progress: Callable[[int, int], None] | None = None,
                 check_division: bool = True) -> Histogram:
    """Histogram of connected induced k-vertex subgraphs of ``g`` by motif id."""
    if not 3 <= k <= iso.MAX_K:
        raise ValueError(f"k must be in [3, {iso.MAX_K}], got {k}")
    if k > g.n:
        raise ValueError(f"k={k} exceeds the number of vertices n={g.n}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    strategy = Strategy.parse(strategy)
    t0 = time.perf_counter()
    bases = enumerate_connected(g, k - 2)
    rows, cls = _prepare_bases(g, bases)
    step = max(1, chunk_size)
    chunks = [(rows[i:i + step], cls[i:i + step]) for i in range(0, rows.shape[0], step)]
    total = bases.shape[0]

    local = threading.local()
    states: list[_Worker] = []
    lock = threading.Lock()
    done = [0]

    def run(chunk):
        w = getattr(local, "worker", None)
        if w is None:
            w = local.worker = _Worker(g, k)
            with lock:
                states.append(w)
        w.run(g, k, chunk[0], chunk[1], strategy, c_scan)
        if progress is not None:
            with lock:
                done[0] += chunk[0].shape[0]
                progress(done[0], total)

    if workers == 1 or len(chunks) <= 1:
        for chunk in chunks:
            run(chunk)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))

    if states:
        parts = [w.items() for w in states]
        keys = np.concatenate([p[0] for p in parts])
        vals = np.concatenate([p[1] for p in parts])
    else:
        keys = vals = np.zeros(0, dtype=np.int64)
    if len(states) > 1:
        keys, inv = np.unique(keys, return_inverse=True)
        merged = np.zeros(keys.shape[0], dtype=np.int64)
        np.add.at(merged, inv.reshape(-1), vals)
        vals = merged
    mins, sums, cache_info = _reduce_keys(k, keys, vals)
    mult = multiplicities(mins, k)
    if np.any(mult == 0):
        bad = int(mins[mult == 0][0])
        raise CountingError(f"raw count landed on disconnected pattern {MotifId(k, bad)}")
    quot, rem = np.divmod(sums, mult)
    bad = np.flatnonzero(rem)
    if bad.size and check_division:
        i = int(bad[0])
        raise CountingError(
            f"{bad.size} raw count(s) not divisible by multiplicity, "
            f"e.g. {MotifId(k, int(mins[i]))}: {int(sums[i])} mod {int(mult[i])} != 0"
        )
    keep = np.flatnonzero(quot)
    counts = {MotifId(k, m): q for m, q in zip(mins[keep].tolist(), quot[keep].tolist())}
    hist = Histogram(k, counts)
    hist.stats = {
        "bases": int(total),
        "count_base_calls": int(sum(w.bases_done for w in states)),
        "edge_queries": int(sum(int(w.counters[0]) for w in states)),
        "membership_tests": int(sum(int(w.counters[1]) for w in states)),
        "labelled_codes": int(keys.size),
        "patterns": len(counts),
        "division_violations": int(bad.size),
        "raw": {MotifId(k, m): v for m, v in zip(mins.tolist(), sums.tolist())},
        "workers": workers,
        "cache": cache_info,
        "wall_time": time.perf_counter() - t0,
    }
    return hist
