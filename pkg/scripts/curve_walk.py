"""Walk the derived lattices of a plane-curve ring and compare the series with
``A_1 + |C(F_p)| A_2``, printing point counts along the way.

    python3 scripts/curve_walk.py --curve elliptic --primes 5 7 11 --order 8
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from nilzeta import building, cones, liering as lr, modcurves as mc
from nilzeta.ratfun import series_at_prime

CURVES = {"conic": lambda: lr.CONIC_R, "elliptic": lambda: lr.dusautoy_R(1)}


@dataclass
class CurveWalkConfig:
    curve: str = "elliptic"
    primes: list[int] = field(default_factory=lambda: [5, 7])
    order: int | None = None  # default 2r + 2


def run(cfg: CurveWalkConfig) -> bool:
    R = CURVES[cfg.curve]()
    P = lr.from_R(R)
    cs = mc.CurveSpec.from_entries(R)
    K = cfg.order if cfg.order is not None else 2 * R.d + 2
    A1, A2 = cones.curve_parts(R.d)
    ok = True
    for p in cfg.primes:
        if not mc.is_smooth_mod_p(cs, p):
            print(f"p={p}: bad reduction, skipped")
            continue
        n = mc.count_points_P2(cs, p)
        t0 = time.perf_counter()
        A = building.building_series(P, p, K)
        want = series_at_prime(A1 + A2 * n, p, K)
        same = A.coeffs == want
        ok &= same
        print(f"p={p} |C|={n} vertices={A.vertices} rho={A.rho} "
              f"{'agree' if same else 'MISMATCH'} ({time.perf_counter() - t0:.2f}s)")
    return ok


def main(argv=None):
    ap = argparse.ArgumentParser(description="vertex walk for plane-curve rings")
    ap.add_argument("--curve", choices=sorted(CURVES), default="elliptic")
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7])
    ap.add_argument("--order", type=int)
    ns = ap.parse_args(argv)
    raise SystemExit(0 if run(CurveWalkConfig(ns.curve, ns.primes, ns.order)) else 1)


if __name__ == "__main__":
    main()
