"""Compare ideal counts from enumeration, the vertex walk and the closed forms.

    python3 scripts/three_paths.py --primes 2 3 --order 4
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from nilzeta import building, cones, liering as lr
from nilzeta.liering import BudgetExceeded
from nilzeta.ratfun import series_at_prime


@dataclass
class ComparisonConfig:
    primes: list[int] = field(default_factory=lambda: [2, 3])
    order: int = 4
    budget: int = lr.DEFAULT_BUDGET
    rings: list[str] = field(default_factory=lambda: list(RINGS))


RINGS = {
    "odd r=1": lambda: lr.block_odd(1),
    "odd r=2": lambda: lr.block_odd(2),
    "even t": lambda: lr.block_even([0]),
    "even t^2+1": lambda: lr.block_even([0, 1]),
    "t + (t-1) + odd": lambda: lr.direct_sum([lr.block_even([0]), lr.block_even([-1]),
                                              lr.block_odd(1)]),
    "conic": lambda: lr.from_R(lr.CONIC_R),
}


def compare(name: str, P: lr.Presentation, p: int, cfg: ComparisonConfig) -> str:
    K = cfg.order
    t0 = time.perf_counter()
    walk = building.assemble_zeta(building.building_series(P, p, K), P.d, P.dprime)
    formula = series_at_prime(cones.formula_zeta(P, p), p, K)
    try:
        oracle = lr.oracle_count(P, p, K, budget=cfg.budget)
    except BudgetExceeded:
        oracle = None
    agree = walk == formula and (oracle is None or oracle == walk)
    note = "" if oracle is not None else " (oracle over budget)"
    dt = time.perf_counter() - t0
    return f"{name:18s} p={p:<3d} {'agree' if agree else 'MISMATCH'}{note}  {dt:6.2f}s  {walk}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--budget", type=int, default=lr.DEFAULT_BUDGET)
    ns = ap.parse_args(argv)
    cfg = ComparisonConfig(ns.primes, ns.order, ns.budget)
    for name in cfg.rings:
        P = RINGS[name]()
        for p in cfg.primes:
            if p in lr.bad_primes(P) and not name.startswith("odd"):
                print(f"{name:18s} p={p:<3d} skipped (bad prime)")
                continue
            print(compare(name, P, p, cfg))


if __name__ == "__main__":
    main()
