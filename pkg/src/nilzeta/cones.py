"""Closed-form generating functions from cone decompositions.

Every function here returns a ``GeoRatFun`` in ``(X, Y) = (p, T)``.  Shares
such as ``1/(p+1)`` are written with geometric denominators,
``(1 - X)/(1 - X^2)``, so that they combine exactly with the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .building import abelian_zeta, abelian_factors
from .liering import EvenBlock, OddBlock, Presentation
from .modcurves import BadPrime, CurveSpec, c_pI, count_points_P2
from .ratfun import BivarPoly, GeoRatFun, geo_equal, geo_sum, substitute


class EmptyI(ValueError):
    pass


class BadParams(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


# -- small building blocks -----------------------------------------------------

X = GeoRatFun.monomial(1, 0)


def mono(a: int, b: int, c=1) -> GeoRatFun:
    return GeoRatFun.monomial(a, b, c)


def geo(numer: Mapping[tuple[int, int], int], denom: Sequence[tuple[int, int]] = ()) -> GeoRatFun:
    return GeoRatFun.make(BivarPoly(dict(numer)), list(denom))


def inv_share(*sizes: int) -> GeoRatFun:
    """``1 / prod_k (1 + p + ... + p^{k-1})`` as ``prod (1-X)/(1-X^k)``."""
    out = GeoRatFun.one()
    for k in sizes:
        out = out * geo({(0, 0): 1, (1, 0): -1}, [(k, 0)])
    return out


def one_minus_inv_p(k: int) -> GeoRatFun:
    """``(1 - p^{-1})^k``."""
    poly = BivarPoly.const(1)
    for _ in range(k):
        poly = poly * BivarPoly({(1, 0): 1, (0, 0): -1})
    return GeoRatFun.make(poly, (), 1, (-k, 0))


def p_binomial(n: int) -> GeoRatFun:
    """``1 + p + ... + p^{n-1}``."""
    return GeoRatFun.poly({(i, 0): 1 for i in range(n)})


# -- multiplicity and cone data ------------------------------------------------


@dataclass(frozen=True)
class MultiplicityData:
    """Block structure of a sum of even and odd blocks.

    ``evens[i]`` lists the multiplicities of the ``i``-th distinct polynomial,
    ``degrees[i]`` its degree, ``odd`` the sizes of the odd blocks.
    """

    evens: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    odd: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.evens) != len(self.degrees):
            raise ValueError("one degree per polynomial")
        if any(e < 1 for es in self.evens for e in es) or any(not es for es in self.evens):
            raise ValueError("multiplicities must be positive")

    @property
    def n(self) -> int:
        return len(self.odd)

    @property
    def d(self) -> int:
        return (sum(2 * di * sum(es) for di, es in zip(self.degrees, self.evens))
                + sum(2 * l + 1 for l in self.odd))

    @classmethod
    def from_presentation(cls, P: Presentation) -> tuple["MultiplicityData", list[tuple[int, ...]]]:
        if P.blocks is None or P.dprime != 2:
            raise UnsupportedFamily("multiplicity data needs a block presentation")
        polys: list[tuple[int, ...]] = []
        mults: list[list[int]] = []
        odd = []
        for b in P.blocks:
            if isinstance(b, OddBlock):
                odd.append(b.r)
            else:
                assert isinstance(b, EvenBlock)
                if b.f not in polys:
                    polys.append(b.f)
                    mults.append([])
                mults[polys.index(b.f)].append(b.e)
        md = cls(tuple(tuple(m) for m in mults), tuple(len(f) - 1 for f in polys), tuple(odd))
        assert md.d == P.d
        return md, polys


@dataclass(frozen=True)
class ConeData:
    d: int
    thresholds: tuple[int, ...]
    coeffs: tuple[int, ...]

    def __post_init__(self):
        th = self.thresholds
        if any(e <= 1 for e in th) or any(a >= b for a, b in zip(th, th[1:])):
            raise ValueError("thresholds must be strictly increasing and > 1")
        if len(self.coeffs) != len(th) + 2:
            raise ValueError("need coefficients c_0 .. c_{sigma+1}")

    @property
    def sigma(self) -> int:
        return len(self.thresholds)

    def exponent(self, a: int, b: int) -> int:
        """T-exponent on the cone point ``(a, b)``."""
        c = self.coeffs
        return (c[0] * b + sum(cr * min(a, er * b) for cr, er in zip(c[1:-1], self.thresholds))
                + c[-1] * a)


def cone_data(md: MultiplicityData, I) -> ConeData:
    I = sorted(set(I))
    if not I:
        raise EmptyI("cone data needs a nonempty index set")
    values = [e for i in I for e in md.evens[i]]
    c0 = -2 * values.count(1)
    th = sorted({e for e in values if e > 1})
    cs = [-2 * values.count(e) for e in th]
    return ConeData(md.d, tuple(th), (c0, *cs, md.d + 1 - md.n))


def _table1_rows(cd: ConeData):
    """``(n_j, [(numer, denoms), ...], m_X, m_Y)`` for each sub-sector."""
    D = cd.d + 1
    c, e, s = cd.coeffs, cd.thresholds, cd.sigma
    rows = []
    tail = sum(c[1:])
    rows.append((1, [({(1, 1): 1}, [(1, 1)])], (D, tail), (-1, c[0])))
    if s == 0:
        rows.append((2, [({(2, 1): 1}, [(1, 0), (1, 1)])], (D, c[1]), (-1, c[0])))
        return rows
    rows.append((2, [({(2, 1): 1}, [(1, 0), (1, 1)]),
                     ({(e[0], 1): -1}, [(e[0], 1), (1, 0)])], (D, tail), (-1, c[0])))
    for j in range(2, s + 1):
        lo, hi = e[j - 2], e[j - 1]
        xexp = sum(c[j:])
        yexp = c[0] + sum(c[r] * e[r - 1] for r in range(1, j))
        rows.append((2, [({(lo, 1): 1, (hi, 1): -1}, [(lo, 1), (hi, 1), (1, 0)])],
                     (D, xexp), (-1, yexp)))
    yexp = c[0] + sum(c[r] * e[r - 1] for r in range(1, s + 1))
    rows.append((2, [({(e[-1], 1): 1}, [(e[-1], 1), (1, 0)])], (D, c[-1]), (-1, yexp)))
    return rows


def cone_sum(cd: ConeData) -> GeoRatFun:
    """Sum over the cone ``a >= b >= 1`` of fibre size times weight."""
    terms = []
    for n_j, parts, mX, mY in _table1_rows(cd):
        share = one_minus_inv_p(n_j - 1)
        for numer, denoms in parts:
            terms.append(share * substitute(numer, denoms, [mX, mY]))
    return geo_sum(terms)


def cone_gf(cd: ConeData) -> GeoRatFun:
    """Generating function of one sector-family whose point meets the
    polynomials in the chosen index set, constant share included."""
    return inv_share(2) + cone_sum(cd)


def a_empty_scaled(d: int, n: int) -> GeoRatFun:
    """``(p+1)`` times the generating function of a sector-family whose point
    misses every polynomial."""
    c = d + 1 - n
    return geo({(0, 0): 1, (d, c): 1}, [(d + 1, c)])


def a_empty(d: int, n: int) -> GeoRatFun:
    return inv_share(2) + mono(d, d + 1 - n) * GeoRatFun.geometric(d + 1, d + 1 - n)


def a_difference(md: MultiplicityData, I) -> GeoRatFun:
    """``A_I - A_empty``, free of the ``1/(p+1)`` shares."""
    c = md.d + 1 - md.n
    return cone_sum(cone_data(md, I)) - mono(md.d, c) * GeoRatFun.geometric(md.d + 1, c)


def assemble_from_counts(md: MultiplicityData, counts: Mapping[frozenset, int]) -> GeoRatFun:
    total = sum(counts.values())
    out = a_empty_scaled(md.d, md.n)
    if total == 0:
        raise ValueError("empty count table")
    for I, cnt in sorted(counts.items(), key=lambda kv: sorted(kv[0])):
        if I and cnt:
            out = out + a_difference(md, I) * cnt
    return out


def assemble_A(md: MultiplicityData, F: Sequence[Sequence[int]], p: int) -> GeoRatFun:
    """``A(p, T)`` for a sum of blocks at a prime of good reduction for ``F``."""
    if len(F) != len(md.evens):
        raise ValueError("one polynomial per multiplicity vector")
    counts = c_pI(F, p)
    if sum(counts.values()) != p + 1:
        raise BadPrime("vanishing-set counts do not cover P^1")
    return assemble_from_counts(md, counts)


# -- named families ------------------------------------------------------------


def prop_odd(r: int) -> GeoRatFun:
    if r < 1:
        raise BadParams("r >= 1 required")
    k = 2 * r + 1
    return geo({(0, 0): 1, (k, k): 1}, [(k + 1, k)])


def prop_even_parts(r: int, e: int) -> tuple[GeoRatFun, GeoRatFun]:
    """``(P_1/D, P_2/D)``: the single-block ``A`` is ``P_1/D + n P_2/D`` with
    ``n`` the number of roots of ``f`` mod p."""
    if r < 1 or e < 1:
        raise BadParams("r, e >= 1 required")
    a, b = (2 * r + 1) * e, (2 * r - 1) * e
    denom = [(2 * r + 1, 2 * r - 1), (2 * r + 1, 2 * r + 1), (a - 1, b)]
    P1 = (BivarPoly({(0, 0): 1, (2 * r + 1, 2 * r - 1): -1})
          * BivarPoly({(0, 0): 1, (2 * r, 2 * r + 1): 1})
          * BivarPoly({(0, 0): 1, (a - 1, b): -1}))
    P2 = (BivarPoly({(2 * r, 2 * r - 1): 1})
          * BivarPoly({(0, 0): 1, (0, 2): -1})
          * BivarPoly({(0, 0): 1, (a, b): -1}))
    return GeoRatFun.make(P1, denom), GeoRatFun.make(P2, denom)


def prop_even(r: int, e: int, n: int) -> GeoRatFun:
    P1, P2 = prop_even_parts(r, e)
    return P1 + P2 * n


def curve_parts(r: int) -> tuple[GeoRatFun, GeoRatFun]:
    """``(A_1, A_2)`` with ``A = A_1 + |C(F_p)| A_2`` for a smooth curve."""
    if r < 2:
        raise BadParams("r >= 2 required")
    num1 = {(0, 0): 1, (2 * r, 2 * r + 1): 1, (2 * r + 1, 2 * r + 1): 1,
            (4 * r, 2 * r + 2): 1, (4 * r + 1, 2 * r + 2): 1, (6 * r + 1, 4 * r + 3): 1}
    A1 = geo(num1, [(4 * r + 2, 2 * r + 2), (2 * r + 2, 2 * r + 1)])
    num2 = (BivarPoly({(0, 0): 1, (0, 1): -1}) * BivarPoly({(0, 0): 1, (0, 1): 1})
            * BivarPoly({(2 * r, 2 * r - 1): 1}) * BivarPoly({(0, 0): 1, (4 * r + 1, 2 * r + 2): 1}))
    A2 = GeoRatFun.make(num2, [(4 * r + 2, 2 * r + 2), (2 * r + 2, 2 * r + 1),
                               (2 * r + 1, 2 * r - 1)])
    return A1, A2


# -- curve case built from the sector-family census -------------------------


def _family_sums(r: int):
    """Boundary and interior sums of one sector-family whose point is off
    the curve, from the weight ``(2r+1)s + (2r+2)t`` and the census
    ``p^{2(s-1)}``, ``p^{2(t-1)}``, ``p^{2s+2t-3}``."""
    d = 2 * r
    # type (p^s,1,1): w = s
    b1 = mono(2 + d, 2 * r + 1, 1) * mono(-2, 0) * GeoRatFun.geometric(d + 2, 2 * r + 1)
    # type (p^t,p^t,1): w = 2t
    b2 = mono(2 + 2 * d, 2 * r + 2) * mono(-2, 0) * GeoRatFun.geometric(2 * d + 2, 2 * r + 2)
    # interior: w = s + 2t, counts p^{2s+2t-3}
    inner = (mono(d + 2 + 2 * d + 2 - 3, 2 * r + 1 + 2 * r + 2)
             * GeoRatFun.geometric(d + 2, 2 * r + 1) * GeoRatFun.geometric(2 * d + 2, 2 * r + 2))
    return b1, b2, inner


def _table2_sum(r: int) -> GeoRatFun:
    """Boundary sum over type ``(p^s,1,1)`` at a smooth point of the curve,
    from the three-dimensional cone subdivision."""
    rows = [
        (1, {(1, 1, 1): 1}, [(1, 1, 1)], [(2 * r, 2 * r + 1), (0, -2), (0, 0)]),
        (2, {(2, 1, 2): 1}, [(1, 1, 1), (1, 0, 1)], [(2 * r + 1, 2 * r + 1), (-1, -2), (0, 0)]),
        (2, {(2, 2, 1): 1}, [(1, 1, 1), (1, 1, 0)], [(2 * r + 1, 2 * r - 1), (0, 0), (-1, 0)]),
        (3, {(2, 1, 1): 1, (4, 2, 2): -1}, [(1, 1, 1), (1, 1, 0), (1, 0, 1), (1, 0, 0)],
         [(2 * r + 2, 2 * r + 1), (-1, -2), (-1, 0)]),
    ]
    return geo_sum(one_minus_inv_p(n - 1) * substitute(num, den, monos)
                   for n, num, den, monos in rows)


def smooth_point_boundary(r: int) -> GeoRatFun:
    return GeoRatFun.make(
        BivarPoly({(0, 0): 1, (2 * r + 1, 2 * r + 1): -1}),
        [(2 * r + 1, 2 * r - 1), (2 * r + 2, 2 * r + 1)], 1, (2 * r, 2 * r - 1))


def line_boundary(r: int) -> GeoRatFun:
    return mono(4 * r, 2 * r + 2) * GeoRatFun.geometric(4 * r + 2, 2 * r + 2)


def thm11_A(r: int, check: bool = True) -> tuple[GeoRatFun, GeoRatFun]:
    """``(A_1, A_2)`` assembled from per-sector-family pieces.

    With ``check`` the intermediate identities and the final agreement with
    :func:`curve_parts` are asserted.
    """
    if r < 2:
        raise BadParams("r >= 2 required")
    share = inv_share(3, 2)
    b1, b2, inner = _family_sums(r)
    A_off = share + inv_share(2) * (b1 + b2) + inner
    sm = _table2_sum(r)
    ln = line_boundary(r)
    if check:
        assert geo_equal(sm, smooth_point_boundary(r)), "smooth-point boundary sum"
        assert geo_equal(b2, ln), "line boundary sum"
    interior = X * sm * ln
    A_sm = share + inv_share(2) * (sm + ln) + interior
    A1 = p_binomial(3) * p_binomial(2) * A_off
    A2 = p_binomial(2) * (A_sm - A_off)
    if check:
        C1, C2 = curve_parts(r)
        assert geo_equal(A1, C1), "A_1 assembly"
        assert geo_equal(A2, C2), "A_2 assembly"
    return A1, A2


# -- display ----------------------------------------------------------------------


def _tex_pow(var: str, e: int) -> str:
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}" if 0 <= e < 10 else f"{var}^{{{e}}}"


def _tex_term(i: int, j: int) -> str:
    return _tex_pow("X", i) + _tex_pow("Y", j) or "1"


def tex_poly(p: BivarPoly) -> str:
    out = []
    for (i, j) in sorted(p.terms, key=lambda k: (k[1], k[0])):
        c = p.terms[(i, j)]
        body = _tex_term(i, j)
        if abs(c) != 1:
            body = f"{abs(c)}" + ("" if body == "1" else body)
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    s = "".join(f"{sg}{b}" for sg, b in out)
    return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class DisplayForm:
    """Factored presentation of a rational function for printing.

    ``numer`` is an ordered product of polynomial factors (single monomials
    print bare, others in parentheses); the denominator is an optional
    collapsed product ``prod_{i=0}^{n-1} (1 - X^i Y)`` followed by factors
    ``(1 - X^a Y^b)``.
    """

    numer: tuple[BivarPoly, ...]
    abelian: int
    denom: tuple[tuple[int, int], ...]

    def to_geo(self) -> GeoRatFun:
        poly = BivarPoly.const(1)
        for f in self.numer:
            poly = poly * f
        return abelian_zeta(self.abelian) * GeoRatFun.make(poly, list(self.denom))

    def render(self) -> str:
        num = ""
        for f in self.numer:
            if len(f.terms) == 1 and next(iter(f.terms.values())) == 1 and f != BivarPoly.const(1):
                num += tex_poly(f)
            else:
                num += f"({tex_poly(f)})"
        den = ""
        if self.abelian:
            den = f"\\prod_{{i=0}}^{_brace(self.abelian - 1)}(1-X^iY)"
            if self.denom:
                den += "\\cdot"
        den += "".join(f"(1-{_tex_term(a, b)})" for a, b in self.denom)
        return f"\\frac{{{num}}}{{{den}}}"


def _brace(n: int) -> str:
    return str(n) if 0 <= n < 10 else f"{{{n}}}"


def curve_display(r: int, d: int, dprime: int = 3) -> tuple[DisplayForm, DisplayForm]:
    """``W_1, W_2`` of a smooth-curve ring with ``d = 2r``, factors ordered by
    decreasing ``Y`` exponent after the collapsed abelian product."""
    k = d * dprime
    num1 = BivarPoly({(0, 0): 1, (2 * r, 2 * r + 1): 1, (2 * r + 1, 2 * r + 1): 1,
                      (4 * r, 2 * r + 2): 1, (4 * r + 1, 2 * r + 2): 1,
                      (6 * r + 1, 4 * r + 3): 1})
    den1 = [(k, d + dprime), (4 * r + 2, 2 * r + 2), (2 * r + 2, 2 * r + 1)]
    num2 = (BivarPoly({(0, 0): 1, (0, 1): -1}), BivarPoly({(0, 0): 1, (0, 1): 1}),
            BivarPoly({(2 * r, 2 * r - 1): 1}), BivarPoly({(0, 0): 1, (4 * r + 1, 2 * r + 2): 1}))
    den2 = den1 + [(2 * r + 1, 2 * r - 1)]
    key = lambda ab: (-ab[1], -ab[0])
    return (DisplayForm((num1,), d, tuple(sorted(den1, key=key))),
            DisplayForm(num2, d, tuple(sorted(den2, key=key))))


# -- dispatcher -------------------------------------------------------------------


FAMILIES = ("prop32", "prop34", "thm11", "dusautoy")
# descriptive names accepted wherever a family is given
FAMILY_ALIASES = {"odd-block": "prop32", "even-block": "prop34",
                  "smooth-curve": "thm11", "elliptic-example": "dusautoy"}


def canonical_family(name: str) -> str:
    return FAMILY_ALIASES.get(name, name)


def closed_form(family: str, **params):
    """Displayed closed forms.

    ``prop32(r)``: ``A``.  ``prop34(r, e)``: ``(P_1/D, P_2/D)``.
    ``thm11(r)``: ``(A_1, A_2)``.  ``dusautoy()``: ``(W_1, W_2)`` after the
    abelian factors (``r = 3``, ``d = 6``, ``d' = 3``).  The descriptive
    names in ``FAMILY_ALIASES`` are accepted too.
    """
    family = canonical_family(family)
    if family == "prop32":
        return prop_odd(int(params.get("r", 0)))
    if family == "prop34":
        return prop_even_parts(int(params.get("r", 0)), int(params.get("e", 1)))
    if family == "thm11":
        return curve_parts(int(params.get("r", 0)))
    if family == "dusautoy":
        W1, W2 = curve_display(3, 6)
        return W1.to_geo(), W2.to_geo()
    raise UnsupportedFamily(f"unknown family {family!r}")


def _geo_from_spec(spec: Mapping) -> GeoRatFun:
    """``{numer: [[c, i, j], ...], denom: [[a, b], ...]}`` to ``GeoRatFun``."""
    terms: dict[tuple[int, int], int] = {}
    for c, i, j in spec["numer"]:
        terms[(int(i), int(j))] = terms.get((int(i), int(j)), 0) + int(c)
    lo = (min(i for i, _ in terms), min(j for _, j in terms))
    poly = BivarPoly({(i - lo[0], j - lo[1]): c for (i, j), c in terms.items()})
    return GeoRatFun.make(poly, [tuple(map(int, ab)) for ab in spec.get("denom", [])], 1, lo)


def family_of(P: Presentation) -> dict:
    fam = P.meta.get("family")
    if isinstance(fam, str):
        return {"name": canonical_family(fam)}
    if isinstance(fam, dict):
        return {**fam, "name": canonical_family(fam.get("name", ""))}
    if P.blocks is not None:
        if len(P.blocks) == 1 and isinstance(P.blocks[0], OddBlock):
            return {"name": "prop32", "r": P.blocks[0].r}
        if len(P.blocks) == 1:
            b = P.blocks[0]
            return {"name": "prop34", "r": len(b.coeffs), "e": b.e}
        return {"name": "blocks"}
    if P.R is not None:
        return {"name": "thm11", "r": P.R.d}
    raise UnsupportedFamily("no closed form is known for a bare matrix presentation")


def formula_A(P: Presentation, p: int) -> GeoRatFun:
    """``A(p, T)`` for ``P`` at the prime ``p`` from the applicable closed form."""
    if "closed_form" in P.meta:
        return _geo_from_spec(P.meta["closed_form"])
    fam = family_of(P)
    name = fam.get("name")
    if name == "prop32":
        return prop_odd(int(fam["r"]))
    if name in ("prop34", "blocks"):
        md, F = MultiplicityData.from_presentation(P)
        return assemble_A(md, F, p)
    if name in ("thm11", "dusautoy"):
        if P.R is None:
            raise UnsupportedFamily("curve families need an R presentation")
        A1, A2 = curve_parts(P.R.d)
        return A1 + A2 * count_points_P2(CurveSpec.from_entries(P.R), p)
    raise UnsupportedFamily(f"no closed form for family {name!r}")


def formula_zeta(P: Presentation, p: int) -> GeoRatFun:
    return abelian_factors(P.d, P.dprime) * formula_A(P, p)
