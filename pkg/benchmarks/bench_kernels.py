"""Time the hot kernels with numba and with the pure-Python fallback.

Each backend runs in its own interpreter (the backend is fixed at import time
by ``DIMOTIF_DISABLE_NUMBA``).  Inputs are kept small enough for the fallback
to finish in a few seconds.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent("""
    import json, sys, time
    import numpy as np
    import dimotif as D
    from dimotif import engine, isomorph as iso, nullmodel

    repeat = int(sys.argv[1])
    rng = np.random.default_rng(7)
    m = rng.random((40, 40)) < 0.12
    np.fill_diagonal(m, False)
    g = D.DirectedGraph(40, np.argwhere(m))
    codes = rng.integers(0, 1 << 20, size=2000)
    cfg = nullmodel.RandomizerConfig(switches_per_edge=3, seed=1)

    cases = {
        "enumerate r=4": lambda: D.enumerate_connected(g, 4),
        "induced_edges split": lambda: D.induced_edges(g, range(40), "split"),
        "count_motifs k=4": lambda: D.count_motifs(g, 4),
        "count_motifs k=5": lambda: D.count_motifs(g, 5),
        "oracle k=4": lambda: D.brute_force_histogram(g, 4),
        "min_code k=5 x2000": lambda: iso.min_codes_many(codes, 5),
        "edge switching": lambda: nullmodel.randomize(g, cfg, 0),
    }
    out = {"backend": D.backend()}
    for name, fn in cases.items():
        fn()  # compile / warm caches
        best = float("inf")
        for _ in range(repeat):
            t = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t)
        out[name] = best
    print(json.dumps(out))
""")


def run_backend(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("DIMOTIF_DISABLE_NUMBA", None)
    if disable:
        env["DIMOTIF_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="PATH", help="also write raw timings here")
    args = ap.parse_args(argv)

    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    if fast.pop("backend") != "numba":
        print("warning: numba backend unavailable; both columns use the fallback")
    slow.pop("backend")

    print(f"{'kernel':<24}{'numba (s)':>12}{'python (s)':>12}{'speedup':>10}")
    for name in fast:
        f, s = fast[name], slow[name]
        print(f"{name:<24}{f:>12.4f}{s:>12.4f}{s / f:>9.0f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": fast, "python": slow}, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
