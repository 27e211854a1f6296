#!/usr/bin/env python3
"""Tabulate treelocal run metadata.

Usage: summarize.py PATH [PATH ...]
Each PATH is a .meta.json file or a directory searched for them.
"""

import argparse
import json
import sys
from pathlib import Path


def collect(paths):
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            yield from sorted(p.rglob("*.meta.json"))
        elif p.is_file():
            yield p
        else:
            print(f"summarize.py: no such path: {p}", file=sys.stderr)


def show(path):
    meta = json.loads(path.read_text())
    cfg = meta.get("config", {})
    head = (
        f"{meta.get('experiment', '?')}  seed={cfg.get('seed', '?')}"
        f"  build={meta.get('build', '?')}  workers={meta.get('workers', '?')}"
        f"  wall={meta.get('wall_seconds', 0.0):.2f}s"
    )
    print(head)
    print(f"  config: {json.dumps(cfg, sort_keys=True)}")
    for r in meta.get("reports", []):
        flag = "PASS" if r.get("pass") else "FAIL"
        print(
            f"  {flag}  {r.get('name', '?'):<28}"
            f" statistic={r.get('statistic'):.6g} threshold={r.get('threshold'):.6g}"
        )
    extras = meta.get("extras", {})
    if extras:
        print(f"  extras: {json.dumps(extras, sort_keys=True)}")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("paths", nargs="+", help=".meta.json files or directories")
    args = ap.parse_args()
    found = False
    for p in collect(args.paths):
        found = True
        show(p)
    return 0 if found else 1


if __name__ == "__main__":
    sys.exit(main())
