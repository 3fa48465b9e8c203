"""Exact coefficient-sum tables: enumeration, generating-function oracle and the
printed closed forms, for every cell up to a given nu."""

from __future__ import annotations

import argparse
import json
import sys

from sievelab.selberg import combinatorics_report, pair_sum_split_check


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--numax", type=int, default=6)
    ap.add_argument("--pairs", action="store_true", help="per-split pair sums instead")
    a = ap.parse_args(argv)
    if a.pairs:
        rows = [
            pair_sum_split_check(n1, n2, k1, k2)
            for n1 in range(1, a.numax + 1)
            for n2 in range(n1, a.numax + 1)
            for k1 in range(1, n1 + 1)
            for k2 in range(1, n2 + 1)
            if k1 + k2 <= n2
        ]
    else:
        rows = combinatorics_report(a.numax)
    json.dump([{k: (str(v) if not isinstance(v, (bool, int)) else v) for k, v in r.items()} for r in rows],
              sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
