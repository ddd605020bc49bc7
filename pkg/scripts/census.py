"""Count maximal sublattices of Z^3 by elementary-divisor type and compare
with the stratum sizes p^{2(s-1)}, p^{2(t-1)}, (p+1) p^{2s+2t-3} times the
p^2 + p + 1 flags.

    python3 scripts/census.py --primes 2 3 5 --max-index 5
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass, field

from nilzeta import intlat


@dataclass
class CensusConfig:
    primes: list[int] = field(default_factory=lambda: [2, 3])
    max_index: int = 5


def expected(p: int, s: int, t: int) -> int:
    flags = p * p + p + 1
    if t == 0:
        return flags * p ** (2 * (s - 1))
    if s == 0:
        return flags * p ** (2 * (t - 1))
    return flags * (p + 1) * p ** (2 * s + 2 * t - 3)


def run(cfg: CensusConfig) -> bool:
    ok = True
    print(f"{'p':>3} {'type':>12} {'count':>10} {'expected':>10}")
    for p in cfg.primes:
        for w in range(1, cfg.max_index + 1):
            got = Counter(intlat.edtype(L, p) for L in intlat.enumerate_maximal_hnf(3, p, w))
            for (a, b, _), n in sorted(got.items()):
                s, t = a - b, b
                want = expected(p, s, t)
                ok &= n == want
                print(f"{p:>3} {str((a, b, 0)):>12} {n:>10} {want:>10}"
                      + ("" if n == want else "  MISMATCH"))
    return ok


def main(argv=None):
    ap = argparse.ArgumentParser(description="maximal-lattice census in rank 3")
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--max-index", type=int, default=5)
    ns = ap.parse_args(argv)
    raise SystemExit(0 if run(CensusConfig(ns.primes, ns.max_index)) else 1)


if __name__ == "__main__":
    main()
