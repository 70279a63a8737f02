#!/usr/bin/env python3
"""Regenerate the bundled tables of Riemann zeta zero ordinates.

Production users should prefer published tables (Odlyzko's tables, LMFDB);
this script exists so the repository's fixtures are reproducible offline.
Ordinates are computed with mpmath's zetazero, written one per line in
ascending order, and sanity-checked against the zero-counting asymptotic
before anything is written.

Usage:
    python3 scripts/make_zero_tables.py --count 100 --dps 45 --digits 38 \
        --out src/lizeta/data/zeros100.txt
    python3 scripts/make_zero_tables.py --count 10000 --dps 20 --digits 15 \
        --out data/zeros10k.txt --jobs 2
"""

import argparse
import math
import sys
import time
from multiprocessing import Pool

import mpmath
from mpmath import mp

_WORKER_DPS = 20


def _init_worker(dps):
    global _WORKER_DPS
    _WORKER_DPS = dps
    mp.dps = dps


def _nth_ordinate(n):
    mp.dps = _WORKER_DPS
    return n, mp.zetazero(n).imag


def expected_count(t):
    """Zero-counting asymptotic (T/2pi) log(T/(2pi e)) + 7/8."""
    return (t / (2 * math.pi)) * math.log(t / (2 * math.pi * math.e)) + 7.0 / 8.0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, required=True)
    ap.add_argument("--dps", type=int, default=20, help="working precision (decimal digits)")
    ap.add_argument("--digits", type=int, default=15, help="significant digits written per ordinate")
    ap.add_argument("--out", required=True)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    t0 = time.time()
    results = [None] * args.count
    with Pool(args.jobs, initializer=_init_worker, initargs=(args.dps,)) as pool:
        done = 0
        for n, gamma in pool.imap_unordered(_nth_ordinate, range(1, args.count + 1), chunksize=8):
            results[n - 1] = gamma
            done += 1
            if done % 500 == 0:
                print(f"  {done}/{args.count} ordinates ({time.time()-t0:.0f}s)", file=sys.stderr)

    for i in range(1, args.count):
        if not results[i] > results[i - 1]:
            raise SystemExit(f"ordinates not strictly increasing at index {i+1}")

    # Count check at a few round checkpoints keeps an isolation bug from
    # silently producing a shifted table.
    for t in (50.0, 100.0, float(results[-1]) + 1e-9):
        observed = sum(1 for g in results if g < t)
        expected = expected_count(t)
        if abs(observed - expected) > 2.0:
            raise SystemExit(f"count mismatch at T={t}: observed {observed}, expected {expected:.2f}")

    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# Riemann zeta nontrivial zero ordinates (positive imaginary parts)\n")
        fh.write(f"# count: {args.count}\n")
        fh.write(f"# significant digits: {args.digits}\n")
        fh.write(f"# generated by scripts/make_zero_tables.py with mpmath {mpmath.__version__} zetazero\n")
        for gamma in results:
            fh.write(mp.nstr(gamma, args.digits, strip_zeros=True) + "\n")
    print(f"wrote {args.count} ordinates to {args.out} in {time.time()-t0:.0f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
