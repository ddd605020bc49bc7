"""Command-line front end.

Exit codes: 0 success, 1 input/usage error, 2 enumeration budget exceeded,
3 no closed form for the input, 4 paths disagree.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass, field
from math import comb

from . import building, cones, liering, modcurves
from .liering import BudgetExceeded, Presentation, PresentationError
from .ratfun import check_functional_equation, format_geo, series_at_prime

EXIT_PARSE, EXIT_BUDGET, EXIT_UNSUPPORTED, EXIT_MISMATCH = 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    primes: list[int] = field(default_factory=list)
    K: int = 4
    budget: int = liering.DEFAULT_BUDGET
    jobs: int = 1
    fmt: str = "text"
    family: str | None = None
    params: dict = field(default_factory=dict)
    paths: tuple[str, ...] = ("oracle", "walk", "formula")

    def __post_init__(self):
        if self.K < 0:
            raise UsageError("order must be nonnegative")
        if any(p < 2 for p in self.primes):
            raise UsageError("primes must be at least 2")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _table(rows: list[list], header: list[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip() + "\n"
                   for r in cells)


def _primes(cfg: RunConfig) -> list[int]:
    if not cfg.primes:
        raise UsageError("at least one --prime is required")
    return cfg.primes


def _load(cfg: RunConfig) -> Presentation:
    if cfg.input is None:
        raise UsageError("an input file is required")
    return liering.load_presentation(cfg.input)


def _warn_bad(P: Presentation, p: int):
    if p in liering.bad_primes(P):
        print(f"warning: p={p} is in the bad-prime set of this presentation", file=sys.stderr)
    if not liering.phi_injective_mod(P, p):
        print(f"warning: the bracket map is not injective mod {p}; walk and formula do not "
              "describe the ideal count", file=sys.stderr)


def _saturation_warning(P: Presentation):
    images = liering.bracket_images(P)
    if P.blocks is None and P.R is None and liering._rank_Q(images) == P.dprime:
        bad = liering._divisor_primes(images, P.dprime)
        if bad:
            print(f"warning: brackets do not span the y-lattice at primes {sorted(bad)}",
                  file=sys.stderr)


# -- commands ------------------------------------------------------------------


def cmd_oracle(cfg: RunConfig, out) -> int:
    P = _load(cfg)
    _saturation_warning(P)
    for p in _primes(cfg):
        counts = liering.oracle_count(P, p, cfg.K, budget=cfg.budget, jobs=cfg.jobs)
        out.write(f"# p={p}\n" if cfg.fmt == "text" else "")
        out.write(_table([[k, a] for k, a in enumerate(counts)], ["k", "a_p^k"], cfg.fmt))
    return 0


def cmd_walk(cfg: RunConfig, out) -> int:
    P = _load(cfg)
    _saturation_warning(P)
    for p in _primes(cfg):
        _warn_bad(P, p)
        A = building.building_series(P, p, cfg.K, jobs=cfg.jobs)
        z = building.assemble_zeta(A, P.d, P.dprime)
        if cfg.fmt == "text":
            out.write(f"# p={p} vertices={A.vertices} max_w={A.max_w} rank_bound={A.rho}\n")
        out.write(_table([[k, a, c] for k, (a, c) in enumerate(zip(A.coeffs, z))],
                         ["k", "A_k", "zeta_k"], cfg.fmt))
    return 0


def _family_components(cfg: RunConfig, P: Presentation | None):
    """Named components ``[(label, GeoRatFun)]`` of a closed form."""
    if cfg.family:
        fam = {"name": cones.canonical_family(cfg.family), **cfg.params}
    else:
        fam = cones.family_of(P)
        if "closed_form" in P.meta:
            return [("A", cones._geo_from_spec(P.meta["closed_form"]))], fam
    name = fam["name"]
    if name == "prop32":
        return [("A", cones.closed_form("prop32", r=fam.get("r", 0)))], fam
    if name == "prop34":
        P1, P2 = cones.closed_form("prop34", r=fam.get("r", 0), e=fam.get("e", 1))
        return [("P1/D", P1), ("P2/D (times n_f,p)", P2)], fam
    if name == "thm11":
        A1, A2 = cones.closed_form("thm11", r=fam.get("r", 0))
        return [("A1", A1), ("A2 (times |C(F_p)|)", A2)], fam
    if name == "dusautoy":
        W1, W2 = cones.closed_form("dusautoy")
        return [("W1", W1), ("W2 (times |E(F_p)|)", W2)], fam
    if name == "blocks" and P is not None:
        md, F = cones.MultiplicityData.from_presentation(P)
        comps = [("(p+1)A_empty", cones.a_empty_scaled(md.d, md.n))]
        m = len(md.evens)
        for mask in range(1, 2 ** m):
            I = [i for i in range(m) if mask >> i & 1]
            comps.append((f"A_I - A_empty, I={[i + 1 for i in I]}", cones.a_difference(md, I)))
        return comps, fam
    raise cones.UnsupportedFamily(f"no closed form for family {name!r}")


def cmd_formula(cfg: RunConfig, out) -> int:
    P = None if cfg.family else _load(cfg)
    comps, fam = _family_components(cfg, P)
    if fam["name"] == "dusautoy":
        for label, form in zip(("W_1(X,Y)", "W_2(X,Y)"), cones.curve_display(3, 6)):
            out.write(f"{label} = {form.render()}\n")
    else:
        for label, f in comps:
            out.write(f"{label} = {format_geo(f)}\n")
    if P is not None and cfg.primes:
        for p in cfg.primes:
            _warn_bad(P, p)
            A = cones.formula_A(P, p)
            z = series_at_prime(building.assemble_zeta(A, P.d, P.dprime), p, cfg.K)
            a = series_at_prime(A, p, cfg.K)
            if cfg.fmt == "text":
                out.write(f"# p={p}\n")
            out.write(_table([[k, x, y] for k, (x, y) in enumerate(zip(a, z))],
                             ["k", "A_k", "zeta_k"], cfg.fmt))
    return 0


def _zeta_dims(fam: dict, P: Presentation | None) -> tuple[int, int] | None:
    if P is not None:
        return P.d, P.dprime
    name = fam["name"]
    if name == "prop32":
        return 2 * int(fam.get("r", 0)) + 1, 2
    if name == "prop34":
        return 2 * int(fam.get("r", 0)), 2
    if name == "thm11":
        return 2 * int(fam.get("r", 0)), 3
    return None


def cmd_funeq(cfg: RunConfig, out) -> int:
    P = None if cfg.family else _load(cfg)
    comps, fam = _family_components(cfg, P)
    already_zeta = fam["name"] == "dusautoy"
    dims = (6, 3) if already_zeta else _zeta_dims(fam, P)
    curve = fam["name"] in ("thm11", "dusautoy")
    for idx, (label, f) in enumerate(comps):
        fe = None if f.is_zero() else check_functional_equation(f)
        if fe is None:
            out.write(f"{label}: none\n")
            continue
        sign, a, b = fe
        out.write(f"{label}: inverts to {'+' if sign > 0 else '-'}X^{a}*Y^{b} times itself\n")
        if dims is None:
            continue
        d, dp = dims
        if not already_zeta:
            sign *= (-1) ** (d + 1)
            a += comb(d, 2) + d * dp
            b += 2 * d + dp
        if curve and idx == 1:
            a -= 1  # |C(F_p)| -> p^{-1} |C(F_p)|
        out.write(f"  zeta level: {'+' if sign > 0 else '-'}p^({a}-{b}s)\n")
    return 0


def cmd_curve(cfg: RunConfig, out) -> int:
    P = _load(cfg)
    if P.R is None:
        raise PresentationError("input has no R matrix", "R")
    cs = modcurves.CurveSpec.from_entries(P.R)
    rows = [[p, modcurves.count_points_P2(cs, p), modcurves.is_smooth_mod_p(cs, p)]
            for p in _primes(cfg)]
    out.write(_table(rows, ["p", "points", "smooth"], cfg.fmt))
    return 0


def cmd_bad_primes(cfg: RunConfig, out) -> int:
    P = _load(cfg)
    out.write(" ".join(str(q) for q in sorted(liering.bad_primes(P))) + "\n")
    return 0


def cmd_compare(cfg: RunConfig, out) -> int:
    P = _load(cfg)
    status = 0
    for p in _primes(cfg):
        _warn_bad(P, p)
        series: dict[str, list[int]] = {}
        if "oracle" in cfg.paths:
            try:
                series["oracle"] = liering.oracle_count(P, p, cfg.K, budget=cfg.budget,
                                                        jobs=cfg.jobs)
            except BudgetExceeded as exc:
                print(f"note: oracle skipped at p={p}: {exc}", file=sys.stderr)
        if "walk" in cfg.paths:
            A = building.building_series(P, p, cfg.K, jobs=cfg.jobs)
            series["walk"] = building.assemble_zeta(A, P.d, P.dprime)
        if "formula" in cfg.paths:
            try:
                z = building.assemble_zeta(cones.formula_A(P, p), P.d, P.dprime)
                series["formula"] = series_at_prime(z, p, cfg.K)
            except cones.UnsupportedFamily as exc:
                print(f"note: formula skipped: {exc}", file=sys.stderr)
        if len(series) < 2:
            raise cones.UnsupportedFamily("fewer than two paths available")
        names = list(series)
        rows = []
        for k in range(cfg.K + 1):
            vals = [series[n][k] for n in names]
            ok = len(set(vals)) == 1
            if not ok:
                status = EXIT_MISMATCH
            rows.append([k, *vals, "ok" if ok else "MISMATCH"])
        if cfg.fmt == "text":
            out.write(f"# p={p}\n")
        out.write(_table(rows, ["k", *names, "status"], cfg.fmt))
    out.write("verdict: " + ("agree" if status == 0 else "mismatch") + "\n")
    return status


COMMANDS = {
    "oracle": cmd_oracle,
    "walk": cmd_walk,
    "formula": cmd_formula,
    "funeq": cmd_funeq,
    "curve": cmd_curve,
    "compare": cmd_compare,
    "bad-primes": cmd_bad_primes,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nilzeta", description="Ideal zeta functions of class-2 Lie rings.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?", help="presentation file (YAML or JSON)")
        sp.add_argument("-p", "--prime", type=int, action="append", default=[], dest="primes")
        sp.add_argument("-K", "--order", type=int, default=4, dest="K")
        sp.add_argument("--budget", type=int, default=liering.DEFAULT_BUDGET)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--format", choices=("text", "csv"), default="text", dest="fmt")
        if name in ("formula", "funeq"):
            sp.add_argument("--family", choices=cones.FAMILIES + tuple(cones.FAMILY_ALIASES))
            sp.add_argument("--r", type=int)
            sp.add_argument("--e", type=int)
        if name == "compare":
            sp.add_argument("--paths", default="oracle,walk,formula",
                            help="comma-separated subset of oracle,walk,formula")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: getattr(ns, k) for k in ("r", "e") if getattr(ns, k, None) is not None}
    paths = tuple(s.strip() for s in getattr(ns, "paths", "oracle,walk,formula").split(","))
    bad = set(paths) - {"oracle", "walk", "formula"}
    if bad:
        raise UsageError(f"unknown paths {sorted(bad)}")
    return RunConfig(ns.command, ns.input, ns.primes, ns.K, ns.budget, ns.jobs, ns.fmt,
                     getattr(ns, "family", None), params, paths)


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except (PresentationError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (cones.UnsupportedFamily, cones.BadParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
