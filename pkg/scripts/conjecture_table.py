#!/usr/bin/env python3
"""Is the even tree the densest host for the even pattern?  Exact table for small hosts."""
import argparse
import csv
import sys

from inducibility.extremal import CONJECTURE_COLUMNS, conjecture_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[4, 5, 6])
    ap.add_argument("--n-max", type=int, default=14)
    args = ap.parse_args()

    w = csv.DictWriter(sys.stdout, fieldnames=CONJECTURE_COLUMNS, lineterminator="\n")
    w.writeheader()
    for k in args.k:
        for row in conjecture_report(k, args.n_max, exact_limit=max(14, args.n_max)):
            w.writerow(row.row())


if __name__ == "__main__":
    main()
