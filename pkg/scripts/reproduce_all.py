"""Regenerate every table and figure data set into results/<target>/.

    python3 scripts/reproduce_all.py [--out results] [targets ...]
"""
import argparse
import time
from pathlib import Path

from gridspec.experiments import TARGETS, reproduce


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("targets", nargs="*", default=list(TARGETS))
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    for target in args.targets:
        t0 = time.perf_counter()
        summary = reproduce(target, args.out / target)
        print(f"{target:14s} {time.perf_counter() - t0:6.1f}s")
        for c in summary["checks"]:
            print(f"    {'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['value']:.6g}")


if __name__ == "__main__":
    main()
