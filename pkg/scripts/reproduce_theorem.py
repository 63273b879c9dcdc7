"""Sweep (p, q, m) and compare the closed-form verdict with the neighbor search.

    python scripts/reproduce_theorem.py --max-q 9 --m 0 1 2 5 --jobs 4
"""

import argparse
import time
from collections import Counter

from jumptile.classify import sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-q", type=int, default=9)
    parser.add_argument("--m", type=int, nargs="+", default=[0, 1, 2, 5])
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    start = time.perf_counter()
    bound = args.max_q
    rows = [r for r in sweep((-bound, bound), (-bound, bound), args.m, jobs=args.jobs) if abs(r.params.q) >= 3]
    elapsed = time.perf_counter() - start

    for m in args.m:
        sub = [r for r in rows if r.params.m == m]
        tally = Counter(r.search.verdict.value for r in sub)
        bad = [r.as_record() for r in sub if not r.agree]
        print(f"m={m:2d}  cells={len(sub):4d}  connected={tally['connected']:3d}  disagreements={len(bad)}")
        for rec in bad:
            print("   ", rec)
        if m == 0:
            pairs = sorted((r.params.p, r.params.q) for r in sub if r.search.connected)
            print("    connected (p, q):", pairs)
    print(f"{len(rows)} cells in {elapsed:.1f}s")


if __name__ == "__main__":
    main()
