"""Command-line front end: ``dimotif --input edges.txt --k 4``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from .engine import CountingError, count_motifs
from .graph import ParseError, load_edge_list
from .induce import Strategy
from .isomorph import MAX_K, class_census
from .nullmodel import RandomizerConfig, significance
from .oracle import brute_force_histogram

STAT_COLUMNS = ("mean", "std", "z", "p")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dimotif",
        description="Exact directed motif counts (k = 3..6) with optional significance analysis.",
    )
    p.add_argument("--input", metavar="PATH", help="edge list, one 'u v' pair per line")
    p.add_argument("--k", type=int, choices=range(3, MAX_K + 1), metavar="{3..6}")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--random", type=int, default=0, metavar="R",
                   help="number of randomized replicas (0 skips the null model)")
    p.add_argument("--switches-per-edge", type=float, default=3.0, metavar="Q")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against brute-force enumeration")
    p.add_argument("--census", type=int, metavar="K",
                   help="print the number of k-vertex digraph classes and exit")
    p.add_argument("--long-run", action="store_true", help="allow the k=6 census")
    p.add_argument("--strategy", choices=("pairwise", "scan", "adaptive", "split"),
                   default="adaptive")
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true",
                   help="omit wall time so identical runs give identical reports")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _fmt(x) -> str:
    if x is None:
        return "NA"
    return f"{x:.6f}"


def _num(x):
    return None if x is None else round(float(x), 6)


def build_report(g, k, hist, ens, oracle_ok, workers, wall, timing=True) -> dict:
    rows = []
    for motif, count in hist.items():
        row = {"motif_id": str(motif), "count": int(count)}
        rows.append(row)
    if ens is not None:
        by_id = {str(m): s for m, s in ens.items()}
        # motifs that only show up in replicas still get a row
        present = {r["motif_id"] for r in rows}
        rows += [{"motif_id": mid, "count": 0} for mid in by_id if mid not in present]
        rows.sort(key=lambda r: r["motif_id"])
        for row in rows:
            s = by_id[row["motif_id"]]
            row.update(mean=_num(s.mean), std=_num(s.std), z=_num(s.z), p=_num(s.p_value))
    footer = {
        "n": g.n,
        "m_directed": g.m,
        "m_pairs": g.m_pairs,
        "bases": hist.stats["bases"],
        "total": hist.total,
        "workers": workers,
        "cache_entries": hist.stats["cache"]["entries"],
        "cache_hits": hist.stats["cache"]["hits"],
        "cache_misses": hist.stats["cache"]["misses"],
    }
    if ens is not None:
        footer["replicas"] = ens.replicas
        footer["switch_rate"] = _num(ens.switch_rate)
    if oracle_ok is not None:
        footer["oracle"] = "MATCH" if oracle_ok else "MISMATCH"
    if timing:
        footer["wall_time"] = _num(wall)
    return {"k": k, "motifs": rows, "footer": footer}


def render_tsv(report: dict) -> str:
    rows = report["motifs"]
    stats = bool(rows) and "mean" in rows[0]
    cols = ("motif_id", "count") + (STAT_COLUMNS if stats else ())
    lines = ["\t".join(cols)]
    for row in rows:
        cells = [row["motif_id"], str(row["count"])]
        if stats:
            cells += [_fmt(row[c]) for c in STAT_COLUMNS]
        lines.append("\t".join(cells))
    for key, val in report["footer"].items():
        text = _fmt(val) if isinstance(val, float) else str(val)
        lines.append(f"# {key}={text}")
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _fail(msg: str, code: int = 2) -> int:
    print(f"dimotif: error: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="dimotif: %(message)s")

    if args.census is not None:
        if not 1 <= args.census <= MAX_K:
            return _fail(f"--census must be in [1, {MAX_K}]")
        try:
            connected = class_census(args.census, True, args.long_run)
            total = class_census(args.census, False, args.long_run)
        except RuntimeError as exc:
            return _fail(str(exc))
        print(f"k={args.census}\tconnected={connected}\tall={total}")
        return 0

    if args.input is None or args.k is None:
        return _fail("--input and --k are required (or use --census K)")
    if args.threads < 1:
        return _fail("--threads must be >= 1")
    if args.random < 0:
        return _fail("--random must be >= 0")

    try:
        g, _ = load_edge_list(args.input)
    except OSError as exc:
        return _fail(f"cannot read {args.input}: {exc.strerror or exc}")
    except ParseError as exc:
        return _fail(f"{args.input}: {exc}")
    if args.k > g.n:
        return _fail(f"k={args.k} exceeds the number of vertices n={g.n}")

    strategy = Strategy.parse(args.strategy)
    t0 = time.perf_counter()
    ens = None
    try:
        if args.random > 0:
            cfg = RandomizerConfig(args.random, args.switches_per_edge, args.seed)
            if g.m < 2:
                return _fail("the null model needs at least 2 edges")
            ens = significance(g, args.k, cfg, workers=args.threads, strategy=strategy)
            hist = ens.original
        else:
            hist = count_motifs(g, args.k, workers=args.threads, strategy=strategy)
    except (CountingError, ValueError) as exc:
        return _fail(str(exc))
    oracle_ok = None
    if args.oracle:
        oracle_ok = brute_force_histogram(g, args.k).counts == hist.counts
    wall = time.perf_counter() - t0

    report = build_report(g, args.k, hist, ens, oracle_ok, args.threads, wall,
                          timing=not args.no_timing)
    text = render_json(report) if args.format == "json" else render_tsv(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if oracle_ok is not None:
        print(f"oracle: {'MATCH' if oracle_ok else 'MISMATCH'}", file=sys.stderr)
        if not oracle_ok:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
