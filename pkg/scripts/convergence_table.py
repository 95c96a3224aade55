#!/usr/bin/env python3
"""Densities of caterpillars and complete patterns in complete hosts, against their limits."""
import argparse
import csv
import sys

from inducibility.counting import caterpillar_liminf, even_inducibility, format_rational, gamma
from inducibility.trees import caterpillar, complete, even


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h-max", type=int, default=12)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["pattern", "host", "n", "gamma", "limit", "abs_gap"])
    for k in (4, 5, 6):
        lim = caterpillar_liminf(k)
        for h in range(2, args.h_max + 1):
            if 2**h < k:
                continue
            g = gamma(caterpillar(k), complete(h))
            w.writerow([f"cat:{k}", f"cb:{h}", 2**h, format(float(g), ".12g"), format_rational(lim), format(float(abs(g - lim)), ".12g")])
    for k in (4, 8):
        lim = even_inducibility(k)
        for n in (16, 64, 256, 1024, 4096):
            g = gamma(even(k), even(n))
            w.writerow([f"even:{k}", f"even:{n}", n, format(float(g), ".12g"), format_rational(lim), format(float(abs(g - lim)), ".12g")])


if __name__ == "__main__":
    main()
