#!/usr/bin/env python3
"""Sweep every interval L inside [q-1] for a list of moduli and print the
best certified bound next to the exact brute-force maximum.

Usage:
  python3 scripts/interval_bound_table.py --kind diff-sperner --n 6 --qs 4,8,9
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qsperner.bounds import best_bound
from qsperner.families import ConstraintSpec, Kind, max_family
from qsperner.padic import PrimePower


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", default="diff-sperner")
    parser.add_argument("--n", type=int, default=6)
    parser.add_argument("--qs", default="4,8,9", help="comma list of prime powers")
    parser.add_argument("--no-brute", action="store_true")
    args = parser.parse_args()

    kind = Kind(args.kind)
    for q in (int(tok) for tok in args.qs.split(",")):
        pp = PrimePower.from_q(q)
        print(f"\n== q = {q}, n = {args.n}, kind = {kind.value}")
        print(f"{'L':>10} {'rule':>5} {'bound':>8} {'brute':>7} {'gap':>6}")
        for lo in range(1, q):
            for hi in range(lo, q):
                spec = ConstraintSpec(
                    kind=kind,
                    n=args.n,
                    L=frozenset(range(lo, hi + 1)),
                    modulus=pp,
                )
                best, _ = best_bound(spec)
                if args.no_brute:
                    print(f"{f'{lo}..{hi}':>10} {best.theorem_id:>5} {best.bound.value:>8}")
                    continue
                found = max_family(spec)
                assert found.max_size <= best.bound.value, "soundness violated"
                gap = best.bound.value - found.max_size
                print(
                    f"{f'{lo}..{hi}':>10} {best.theorem_id:>5} "
                    f"{best.bound.value:>8} {found.max_size:>7} {gap:>6}"
                )
    return 0


if __name__ == "__main__":
    sys.exit(main())
