"""Survey of the gaps between the minimal, decomposition and maximal norms on random spaces.

Prints one line per instance and a summary of the ratios dec/m and M/m.
"""
import argparse
import csv
import random
import sys
from fractions import Fraction

from ordspace import cone as cn
from ordspace import norms
from ordspace.cone import OrderedSpace
from ordspace.core import ComplexElement
from ordspace.linalg import rank


def random_space(rng, n):
    e = tuple(Fraction(rng.randint(1, 3)) for _ in range(n))
    while True:
        rows = []
        for _ in range(n + rng.randint(0, 3)):
            a = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
            s = sum(x * y for x, y in zip(a, e))
            if s:
                rows.append(a if s > 0 else tuple(-x for x in a))
        if len(rows) >= n and rank([list(r) for r in rows], n) == n:
            return OrderedSpace(cn.h_cone(rows), e)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--max-dim", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--csv", help="also write the table to this file")
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    rows = []
    for k in range(args.count):
        n = rng.randint(2, args.max_dim)
        sp = random_space(rng, n)
        v = ComplexElement(
            tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)), tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
        )
        m = norms.minimal_norm(sp, v)
        if m.value == 0:
            continue
        d = norms.decomposition_norm(sp, v, args.tol)
        M = norms.maximal_norm(sp, v, args.tol)
        rows.append((k, n, m.value, d.midpoint, M.midpoint, d.midpoint / m.value, M.midpoint / m.value))
        print(f"{k:3d} n={n} m={m.value:.6f} dec={d.midpoint:.6f} M={M.midpoint:.6f} "
              f"dec/m={rows[-1][5]:.4f} M/m={rows[-1][6]:.4f}")
    if rows:
        dm = [r[5] for r in rows]
        Mm = [r[6] for r in rows]
        print(f"dec/m: min {min(dm):.4f} max {max(dm):.4f}   M/m: min {min(Mm):.4f} max {max(Mm):.4f} (bound 2)")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["instance", "n", "m", "dec", "M", "dec_over_m", "M_over_m"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
