"""Degree-preserving random ensembles and per-motif significance.

Replicas come from edge switching.  Purely directed edges (a->b), (c->d)
become (a->d), (c->b); bidirected pairs are switched only with other
bidirected pairs.  A switch is skipped when it would create a self-loop or
touch a vertex pair that is already adjacent in either direction, so every
vertex keeps its in-, out- and bidirected degree.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._jit import int_dict, njit
from .engine import count_motifs
from .graph import DirectedGraph
from .histogram import Histogram
from .induce import Strategy
from .isomorph import MotifId


@dataclass(frozen=True)
class RandomizerConfig:
    replicas: int = 511
    switches_per_edge: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if not self.switches_per_edge > 0:
            raise ValueError("switches_per_edge must be > 0")

    def attempts(self, m: int) -> int:
        return math.ceil(self.switches_per_edge * m)


@dataclass(frozen=True)
class SwitchStats:
    attempts: int
    accepted: int

    @property
    def rate(self) -> float:
        return self.accepted / self.attempts if self.attempts else 0.0


@njit
def _adjacent(present, n, u, v):
    return present.get(u * n + v, 0) != 0 or present.get(v * n + u, 0) != 0


@njit
def switch_kernel(src, dst, bi_u, bi_v, n, pick, other, flip, present):
    """Run one attempt per entry of ``pick``; edges are rewritten in place.

    ``src/dst`` hold purely directed edges, ``bi_u/bi_v`` bidirected pairs.
    ``present`` maps ``u * n + v`` to 1 for every directed edge.
    Returns the number of accepted switches.
    """
    nd = src.shape[0]
    nb = bi_u.shape[0]
    total = nd + nb
    accepted = 0
    for t in range(pick.shape[0]):
        i = int(pick[t] * total)
        if i < nd:
            if nd < 2:
                continue
            j = int(other[t] * (nd - 1))
            if j >= i:
                j += 1
            a = src[i]
            b = dst[i]
            c = src[j]
            d = dst[j]
            if a == d or c == b or a == c or b == d:
                continue
            if _adjacent(present, n, a, d) or _adjacent(present, n, c, b):
                continue
            present[a * n + b] = 0
            present[c * n + d] = 0
            present[a * n + d] = 1
            present[c * n + b] = 1
            dst[i] = d
            dst[j] = b
        else:
            i -= nd
            if nb < 2:
                continue
            j = int(other[t] * (nb - 1))
            if j >= i:
                j += 1
            a = bi_u[i]
            b = bi_v[i]
            if flip[t]:
                c = bi_v[j]
                d = bi_u[j]
            else:
                c = bi_u[j]
                d = bi_v[j]
            if a == d or c == b or a == c or b == d:
                continue
            if _adjacent(present, n, a, d) or _adjacent(present, n, c, b):
                continue
            for x, y in ((a, b), (b, a), (c, d), (d, c)):
                present[x * n + y] = 0
            for x, y in ((a, d), (d, a), (c, b), (b, c)):
                present[x * n + y] = 1
            bi_v[i] = d
            bi_u[j] = c
            bi_v[j] = b
        accepted += 1
    return accepted


def replica_rng(seed: int, replica_index: int) -> np.random.Generator:
    """Counter-based stream fixed by ``(seed, replica_index)`` alone."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1),
                                                                        replica_index])))


def _split_edges(g: DirectedGraph):
    e = g.edges
    if e.shape[0] == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, empty
    keys = e[:, 0] * g.n + e[:, 1]
    rev = e[:, 1] * g.n + e[:, 0]
    mutual = np.isin(rev, keys)
    single = e[~mutual]
    pairs = e[mutual & (e[:, 0] < e[:, 1])]
    return (single[:, 0].copy(), single[:, 1].copy(), pairs[:, 0].copy(), pairs[:, 1].copy())


def switch_chain(g: DirectedGraph, cfg: RandomizerConfig, replica_index: int):
    """Randomized copy of ``g`` plus the switch acceptance counts."""
    if g.m < 2:
        raise ValueError("randomization needs at least 2 edges")
    attempts = cfg.attempts(g.m)
    rng = replica_rng(cfg.seed, replica_index)
    pick = rng.random(attempts)
    other = rng.random(attempts)
    flip = rng.integers(0, 2, size=attempts).astype(np.int8)
    src, dst, bu, bv = _split_edges(g)
    present = int_dict()
    _fill_present(present, g.edges, g.n)
    accepted = switch_kernel(src, dst, bu, bv, g.n, pick, other, flip, present)
    edges = np.concatenate([
        np.stack([src, dst], axis=1),
        np.stack([bu, bv], axis=1),
        np.stack([bv, bu], axis=1),
    ]).astype(np.int64)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    out = DirectedGraph(g.n, edges[order], labels=g.labels)
    return out, SwitchStats(attempts, int(accepted))


@njit
def _fill_present(present, edges, n):
    for t in range(edges.shape[0]):
        present[edges[t, 0] * n + edges[t, 1]] = 1


def randomize(g: DirectedGraph, cfg: RandomizerConfig, replica_index: int) -> DirectedGraph:
    return switch_chain(g, cfg, replica_index)[0]


def degree_vectors(g: DirectedGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(in-degree, out-degree, bidirected degree) per vertex."""
    outd = np.bincount(g.edges[:, 0], minlength=g.n) if g.m else np.zeros(g.n, dtype=np.int64)
    ind = np.bincount(g.edges[:, 1], minlength=g.n) if g.m else np.zeros(g.n, dtype=np.int64)
    _, _, bu, bv = _split_edges(g)
    bid = np.bincount(np.concatenate([bu, bv]), minlength=g.n)
    return ind, outd, bid


# ---------------------------------------------------------------------------
# statistics


@dataclass(frozen=True)
class MotifStats:
    f_orig: int
    mean: float
    std: float
    z: float | None
    p_value: float

    @property
    def z_defined(self) -> bool:
        return self.z is not None


@dataclass
class EnsembleStats:
    k: int
    replicas: int
    rows: dict[MotifId, MotifStats]
    switch_rate: float = 0.0
    original: Histogram | None = field(default=None, compare=False)
    stats: dict = field(default_factory=dict, compare=False)

    def __getitem__(self, motif) -> MotifStats:
        if not isinstance(motif, MotifId):
            motif = MotifId.parse(str(motif))
        return self.rows[motif]

    def __len__(self) -> int:
        return len(self.rows)

    def items(self):
        return sorted(self.rows.items())


def ensemble_stats(k: int, original: dict, replica_counts: list[dict]) -> EnsembleStats:
    """Mean, sample std, z and empirical p-value per motif from integer counts."""
    if not replica_counts:
        raise ValueError("need at least one replica")
    motifs = set(m for m, c in original.items() if c)
    for rc in replica_counts:
        motifs.update(m for m, c in rc.items() if c)
    rows = {}
    r = len(replica_counts)
    for motif in sorted(motifs):
        f = int(original.get(motif, 0))
        vec = np.array([rc.get(motif, 0) for rc in replica_counts], dtype=np.float64)
        mean = float(vec.mean())
        std = float(vec.std(ddof=1)) if r > 1 else 0.0
        z = (f - mean) / std if std > 0 else None
        p = float(np.count_nonzero(vec >= f)) / r
        rows[motif] = MotifStats(f, mean, std, z, p)
    return EnsembleStats(k, r, rows)


def significance(g: DirectedGraph, k: int, cfg: RandomizerConfig, workers: int = 1,
                 strategy=Strategy.ADAPTIVE) -> EnsembleStats:
    """Count k-motifs in ``g`` and in ``cfg.replicas`` randomized copies."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    original = count_motifs(g, k, workers=workers, strategy=strategy)

    def job(index):
        rg, sw = switch_chain(g, cfg, index)
        return count_motifs(rg, k, strategy=strategy).counts, sw

    if workers == 1:
        results = [job(i) for i in range(cfg.replicas)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(cfg.replicas)))
    counts = [c for c, _ in results]
    attempts = sum(sw.attempts for _, sw in results)
    accepted = sum(sw.accepted for _, sw in results)
    out = ensemble_stats(k, original.counts, counts)
    out.switch_rate = accepted / attempts if attempts else 0.0
    out.original = original
    out.stats = {"attempts": attempts, "accepted": accepted}
    return out
