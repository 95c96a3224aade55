#!/usr/bin/env python3
"""Heuristic maximum density of the five-leaf tree A52 over large hosts.

Prints one CSV row per host size.  The value reported is the exact density
of the best host found, so it is a lower bound on the true maximum.
"""
import argparse
import sys
import time

from inducibility.extremal import SearchConfig, max_gamma, reports_to_csv
from inducibility.trees import a52


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128, 256, 512])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--beam", type=int, default=64)
    ap.add_argument("--restarts", type=int, default=32)
    args = ap.parse_args()

    cfg = SearchConfig(beam_width=args.beam, restarts=args.restarts, seed=args.seed)
    reports = []
    for n in args.sizes:
        t0 = time.perf_counter()
        r = max_gamma(a52(), n, cfg)
        print(f"n={n}: {float(r.best_value):.6f} ({time.perf_counter() - t0:.1f}s)", file=sys.stderr)
        reports.append(r)
    sys.stdout.write(reports_to_csv(reports))


if __name__ == "__main__":
    main()
