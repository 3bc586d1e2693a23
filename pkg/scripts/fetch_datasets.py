"""List the benchmark network sources and convert downloaded files to edge lists.

Nothing is downloaded here.  Obtain the files from the owning collections
yourself, then convert them into ``data/<name>.txt`` (two integer columns),
which is where the dataset acceptance check looks (override with
``DIMOTIF_DATA``).

    python scripts/fetch_datasets.py list
    python scripts/fetch_datasets.py convert --format alon coliInterNoAutoRegVec.txt data/ecoli.txt
    python scripts/fetch_datasets.py convert --format pajek CSphd.net data/csphd.txt
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

# name -> (collection, description, expected n, expected m)
SOURCES = {
    "ecoli": ("Uri Alon lab network motif datasets", "E. coli transcriptional regulation", 418, 519),
    "yeast": ("Uri Alon lab network motif datasets", "S. cerevisiae transcriptional regulation",
              688, 1079),
    "csphd": ("Pajek datasets (Batagelj & Mrvar)", "CSphd: computer science PhD genealogy",
              1882, 1740),
    "roget": ("Pajek datasets (Batagelj & Mrvar)", "Roget thesaurus cross references", 1022, 5074),
    "epa": ("Pajek datasets (Batagelj & Mrvar)", "EPA web pages", 4271, 8965),
    "california": ("Pajek datasets (Batagelj & Mrvar)", "California web pages", 6175, 16150),
    "odlis": ("Pajek datasets (Batagelj & Mrvar)", "ODLIS dictionary of library science",
              2900, 18241),
}


def read_alon(text: str) -> list[tuple[int, int]]:
    """Whitespace columns ``source target [type ...]``; extra columns are ignored."""
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if len(parts) < 2 or parts[0].startswith(("#", "%")):
            continue
        edges.append((int(parts[0]), int(parts[1])))
    return edges


def read_pajek(text: str) -> list[tuple[int, int]]:
    """``*Arcs`` are directed; ``*Edges`` become two opposite arcs.  Ids stay 1-based."""
    edges = []
    section = None
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        if s.startswith("*"):
            section = s.split()[0].lower()
            continue
        if section not in ("*arcs", "*edges"):
            continue
        parts = s.split()
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        if section == "*edges":
            edges.append((v, u))
    return edges


def convert(fmt: str, src: Path, dest: Path) -> int:
    text = src.read_text(errors="replace")
    edges = read_alon(text) if fmt == "alon" else read_pajek(text)
    dest.parent.mkdir(parents=True, exist_ok=True)
    with open(dest, "w") as fh:
        fh.write(f"# converted from {src.name}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
    print(f"{dest}: {len(edges)} directed edges written")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("list", help="show sources and expected sizes")
    c = sub.add_parser("convert", help="convert a downloaded file to a 2-column edge list")
    c.add_argument("--format", choices=("alon", "pajek"), required=True)
    c.add_argument("src", type=Path)
    c.add_argument("dest", type=Path)
    args = ap.parse_args(argv)

    if args.cmd == "list":
        print(f"{'name':<12}{'n':>7}{'m':>8}  collection / description")
        for name, (coll, desc, n, m) in SOURCES.items():
            print(f"{name:<12}{n:>7}{m:>8}  {coll}: {desc}")
        print("\nSave converted files as data/<name>.txt.")
        return 0
    return convert(args.format, args.src, args.dest)


if __name__ == "__main__":
    sys.exit(main())
