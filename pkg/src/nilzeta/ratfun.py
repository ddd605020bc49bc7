"""Exact bivariate rational functions with geometric denominators.

A :class:`GeoRatFun` is a value of the form

    scalar * X^u * Y^v * numer(X, Y) / prod_k (1 - X^a_k * Y^b_k)

with ``numer`` an integer polynomial.  Every generating function in this
package has that shape, so equality is decided by cross-multiplication and
no multivariate gcd is ever needed.  Throughout, ``X`` plays the role of the
prime ``p`` and ``Y`` the role of ``T = p^{-s}``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, int]


class NotExpandable(ValueError):
    """Raised when a function has no power series expansion in ``Y``."""


class PoleError(ZeroDivisionError):
    """Raised when evaluating at a zero of a denominator factor."""


class BivarPoly:
    """Sparse integer polynomial in ``X`` and ``Y`` (exponents may be negative
    for intermediate Laurent arithmetic; stored coefficients are never 0)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, int] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[(int(k[0]), int(k[1]))] = c
        self.terms: dict[Exponent, int] = clean

    @classmethod
    def const(cls, c: int) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c: int = 1) -> "BivarPoly":
        return cls({(i, j): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"BivarPoly({format_poly(self)})"

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BivarPoly(out)

    def __neg__(self) -> "BivarPoly":
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        if not self.terms or not other.terms:
            return BivarPoly()
        out: dict[Exponent, int] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivarPoly(out)

    def scale(self, c: int) -> "BivarPoly":
        return BivarPoly({k: c * v for k, v in self.terms.items()})

    def shift(self, di: int, dj: int) -> "BivarPoly":
        return BivarPoly({(i + di, j + dj): c for (i, j), c in self.terms.items()})

    def min_exponents(self) -> Exponent:
        return (min(i for i, _ in self.terms), min(j for _, j in self.terms))

    def max_exponents(self) -> Exponent:
        return (max(i for i, _ in self.terms), max(j for _, j in self.terms))

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    def reversed(self) -> "BivarPoly":
        """``X^dx Y^dy P(1/X, 1/Y)`` for the bounding box ``(dx, dy)``."""
        if not self.terms:
            return BivarPoly()
        mx, my = self.max_exponents()
        return BivarPoly({(mx - i, my - j): c for (i, j), c in self.terms.items()})

    def evaluate(self, x, y):
        total = Fraction(0)
        for (i, j), c in self.terms.items():
            total += c * Fraction(x) ** i * Fraction(y) ** j
        return total

    def divide_by_x_binomial(self, a: int) -> "BivarPoly | None":
        """Exact quotient by ``1 - X^a`` (``a > 0``), or ``None``."""
        rows: dict[int, dict[int, int]] = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, {})[i] = c
        out = {}
        for j, row in rows.items():
            # q(X) (1 - X^a) = row(X); solve upward from the lowest degree
            rem = dict(row)
            lo = min(rem)
            hi = max(rem)
            q = {}
            for i in range(lo, hi - a + 1):
                c = rem.get(i, 0)
                if c:
                    q[i] = c
                    rem[i] = 0
                    rem[i + a] = rem.get(i + a, 0) + c
            if any(rem.values()):
                return None
            for i, c in q.items():
                out[(i, j)] = c
        return BivarPoly(out)


def geometric_product(denoms: Iterable[Exponent]) -> BivarPoly:
    """Expanded product of ``(1 - X^a Y^b)`` over ``denoms``."""
    out = BivarPoly.const(1)
    for a, b in denoms:
        out = out * BivarPoly({(0, 0): 1, (a, b): -1})
    return out


def _frac(q) -> Fraction:
    return q if isinstance(q, Fraction) else Fraction(q)


@dataclass(frozen=True, eq=False)
class GeoRatFun:
    """``scalar * X^u Y^v * numer / prod(1 - X^a Y^b)``.

    Construct through :meth:`make` (or the helpers below) so that the
    canonical form holds: ``numer`` has nonnegative exponents with minimum 0
    in each variable, integer coefficients with content 1 and a positive
    coefficient on its smallest term; denominator pairs are nonnegative and
    sorted.  Structural fields are not unique for a given function; use
    :func:`geo_equal` to compare values.
    """

    scalar: Fraction
    prefactor: Exponent
    numer: BivarPoly
    denom: tuple[Exponent, ...] = field(default=())

    # -- construction --------------------------------------------------

    @classmethod
    def make(cls, numer, denom: Iterable[Exponent] = (), scalar=1,
             prefactor: Exponent = (0, 0)) -> "GeoRatFun":
        if not isinstance(numer, BivarPoly):
            numer = BivarPoly(numer)
        scalar = _frac(scalar)
        u, v = prefactor
        if scalar == 0 or numer.is_zero():
            return cls(Fraction(0), (0, 0), BivarPoly(), ())
        fixed = []
        for a, b in denom:
            if a == 0 and b == 0:
                raise ValueError("denominator factor (1 - 1) vanishes identically")
            if a >= 0 and b >= 0:
                fixed.append((a, b))
            elif a <= 0 and b <= 0:
                # 1/(1 - m^-1) = -m/(1 - m)
                fixed.append((-a, -b))
                scalar = -scalar
                u, v = u - a, v - b
            else:
                raise ValueError(f"factor (1 - X^{a} Y^{b}) has mixed-sign exponents")
        mi, mj = numer.min_exponents()
        numer = numer.shift(-mi, -mj)
        u, v = u + mi, v + mj
        g = numer.content()
        low = min(numer.terms)
        if numer.terms[low] < 0:
            g = -g
        if g != 1:
            numer = BivarPoly({k: c // g for k, c in numer.terms.items()})
            scalar *= g
        return cls(scalar, (u, v), numer, tuple(sorted(fixed)))

    @classmethod
    def const(cls, q) -> "GeoRatFun":
        return cls.make(BivarPoly.const(1), (), scalar=q)

    @classmethod
    def one(cls) -> "GeoRatFun":
        return cls.const(1)

    @classmethod
    def zero(cls) -> "GeoRatFun":
        return cls.const(0)

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1) -> "GeoRatFun":
        """``coeff * X^a Y^b`` (Laurent exponents allowed)."""
        return cls.make(BivarPoly.const(1), (), scalar=coeff, prefactor=(a, b))

    @classmethod
    def geometric(cls, a: int, b: int) -> "GeoRatFun":
        """``1 / (1 - X^a Y^b)``."""
        return cls.make(BivarPoly.const(1), [(a, b)])

    @classmethod
    def poly(cls, terms: Mapping[Exponent, int] | BivarPoly) -> "GeoRatFun":
        p = terms if isinstance(terms, BivarPoly) else BivarPoly(terms)
        return cls.make(p)

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.scalar == 0

    def full_numerator(self) -> tuple[Fraction, BivarPoly]:
        """``(scalar, X^u Y^v numer)`` with the prefactor folded in."""
        return self.scalar, self.numer.shift(*self.prefactor)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other) -> "GeoRatFun":
        return geo_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "GeoRatFun":
        return GeoRatFun(-self.scalar, self.prefactor, self.numer, self.denom)

    def __sub__(self, other) -> "GeoRatFun":
        return geo_add(self, -_coerce(other))

    def __rsub__(self, other) -> "GeoRatFun":
        return geo_add(_coerce(other), -self)

    def __mul__(self, other) -> "GeoRatFun":
        return geo_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"GeoRatFun({format_geo(self)})"

    def __str__(self) -> str:
        return format_geo(self)


def _coerce(x) -> GeoRatFun:
    if isinstance(x, GeoRatFun):
        return x
    if isinstance(x, (int, Fraction)):
        return GeoRatFun.const(x)
    raise TypeError(f"cannot combine GeoRatFun with {type(x).__name__}")


def _multiset_union(a: Sequence[Exponent], b: Sequence[Exponent]) -> Counter:
    ca, cb = Counter(a), Counter(b)
    return ca | cb


def geo_add(f: GeoRatFun, g: GeoRatFun) -> GeoRatFun:
    """Sum over the union-with-max of the two denominator multisets."""
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    union = _multiset_union(f.denom, g.denom)
    u = min(f.prefactor[0], g.prefactor[0])
    v = min(f.prefactor[1], g.prefactor[1])
    L = f.scalar.denominator * g.scalar.denominator // gcd(f.scalar.denominator,
                                                           g.scalar.denominator)
    total = BivarPoly()
    for h in (f, g):
        missing = union - Counter(h.denom)
        c = h.scalar.numerator * (L // h.scalar.denominator)
        part = (h.numer * geometric_product(missing.elements())).shift(
            h.prefactor[0] - u, h.prefactor[1] - v)
        total = total + part.scale(c)
    return GeoRatFun.make(total, union.elements(), Fraction(1, L), (u, v))


def geo_mul(f: GeoRatFun, g: GeoRatFun) -> GeoRatFun:
    if f.is_zero() or g.is_zero():
        return GeoRatFun.zero()
    return GeoRatFun.make(
        f.numer * g.numer,
        list(f.denom) + list(g.denom),
        f.scalar * g.scalar,
        (f.prefactor[0] + g.prefactor[0], f.prefactor[1] + g.prefactor[1]),
    )


def geo_sum(terms: Iterable[GeoRatFun]) -> GeoRatFun:
    out = GeoRatFun.zero()
    for t in terms:
        out = geo_add(out, t)
    return out


def geo_product(terms: Iterable[GeoRatFun]) -> GeoRatFun:
    out = GeoRatFun.one()
    for t in terms:
        out = geo_mul(out, t)
    return out


def geo_equal(f: GeoRatFun, g: GeoRatFun) -> bool:
    """Exact equality of values by cross-multiplication."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    cf, cg = Counter(f.denom), Counter(g.denom)
    common = cf & cg
    only_f = cf - common
    only_g = cg - common
    u = min(f.prefactor[0], g.prefactor[0])
    v = min(f.prefactor[1], g.prefactor[1])
    lhs = (f.numer * geometric_product(only_g.elements())).shift(
        f.prefactor[0] - u, f.prefactor[1] - v)
    rhs = (g.numer * geometric_product(only_f.elements())).shift(
        g.prefactor[0] - u, g.prefactor[1] - v)
    lhs = lhs.scale(f.scalar.numerator * g.scalar.denominator)
    rhs = rhs.scale(g.scalar.numerator * f.scalar.denominator)
    return lhs == rhs


def invert_vars(f: GeoRatFun) -> GeoRatFun:
    """Substitute ``X -> 1/X`` and ``Y -> 1/Y``."""
    if f.is_zero():
        return f
    dx, dy = f.numer.max_exponents()
    sa = sum(a for a, _ in f.denom)
    sb = sum(b for _, b in f.denom)
    sign = -1 if len(f.denom) % 2 else 1
    u, v = f.prefactor
    return GeoRatFun.make(
        f.numer.reversed(), f.denom, sign * f.scalar,
        (-u - dx + sa, -v - dy + sb))


def check_functional_equation(f: GeoRatFun) -> tuple[int, int, int] | None:
    """Return ``(sign, a, b)`` with ``f(1/X, 1/Y) = sign X^a Y^b f(X, Y)``.

    The candidate comes from the point symmetry of the numerator support;
    it is then confirmed by :func:`geo_equal`.  ``None`` means no monomial
    functional equation exists.
    """
    if f.is_zero():
        raise ValueError("the zero function satisfies every functional equation")
    inv = invert_vars(f)
    # both sides are canonical with identical denominators, so a monomial
    # equation forces identical numerators and scalars equal up to sign
    if inv.numer != f.numer or abs(inv.scalar) != abs(f.scalar):
        return None
    sign = 1 if inv.scalar == f.scalar else -1
    a = inv.prefactor[0] - f.prefactor[0]
    b = inv.prefactor[1] - f.prefactor[1]
    if not geo_equal(inv, GeoRatFun.monomial(a, b, sign) * f):
        return None
    return sign, a, b


def substitute(numer: Mapping[tuple[int, ...], int], denoms: Iterable[tuple[int, ...]],
               monomials: Sequence[Exponent], scalar=1) -> GeoRatFun:
    """Build ``numer / prod(1 - m)`` in several abstract variables and
    substitute each abstract variable by a Laurent monomial ``X^a Y^b``.

    ``numer`` maps abstract exponent vectors to integer coefficients and
    ``denoms`` lists abstract exponent vectors of geometric factors.
    """

    def image(vec):
        a = sum(e * m[0] for e, m in zip(vec, monomials))
        b = sum(e * m[1] for e, m in zip(vec, monomials))
        return a, b

    terms: dict[Exponent, int] = {}
    for vec, c in numer.items():
        k = image(vec)
        terms[k] = terms.get(k, 0) + c
    poly = BivarPoly(terms)
    if poly.is_zero():
        return GeoRatFun.zero()
    lo = poly.min_exponents()
    return GeoRatFun.make(poly.shift(-lo[0], -lo[1]), [image(d) for d in denoms],
                          scalar, lo)


# -- evaluation and series -------------------------------------------------


def eval_at(f: GeoRatFun, x, y) -> Fraction:
    x, y = Fraction(x), Fraction(y)
    den = Fraction(1)
    for a, b in f.denom:
        factor = 1 - x ** a * y ** b
        if factor == 0:
            raise PoleError(f"factor (1 - X^{a} Y^{b}) vanishes at ({x}, {y})")
        den *= factor
    if f.is_zero():
        return Fraction(0)
    u, v = f.prefactor
    return f.scalar * x ** u * y ** v * f.numer.evaluate(x, y) / den


Laurent = dict[int, Fraction]


@dataclass
class SeriesInT:
    """Coefficients of ``Y^0 .. Y^K``, each a Laurent polynomial in ``X``
    stored as ``{exponent: coefficient}``."""

    coeffs: list[Laurent]
    K: int

    def __post_init__(self):
        if len(self.coeffs) != self.K + 1:
            raise ValueError("series length must be K + 1")

    def at(self, x) -> list[Fraction]:
        x = Fraction(x)
        return [sum((c * x ** i for i, c in row.items()), Fraction(0))
                for row in self.coeffs]

    def at_int(self, x: int) -> list[int]:
        vals = self.at(x)
        for k, v in enumerate(vals):
            if v.denominator != 1:
                raise ValueError(f"coefficient of Y^{k} at X={x} is not an integer: {v}")
        return [int(v) for v in vals]

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for row in self.coeffs for c in row.values())

    def is_polynomial(self) -> bool:
        return all(i >= 0 for row in self.coeffs for i in row)


def cancel_constant_factors(f: GeoRatFun) -> GeoRatFun:
    """Divide out every denominator factor free of ``Y`` (``1 - X^a``).

    This succeeds exactly when the value has no pole along those factors,
    which is the case for assembled generating functions whose ``1/(p+1)``
    style shares add up to polynomials.
    """
    numer = f.numer
    keep = []
    for a, b in f.denom:
        if b != 0:
            keep.append((a, b))
            continue
        q = numer.divide_by_x_binomial(a)
        if q is None:
            raise NotExpandable(f"numerator is not divisible by (1 - X^{a})")
        numer = q
    return GeoRatFun.make(numer, keep, f.scalar, f.prefactor)


def series_in_T(f: GeoRatFun, K: int, integral: bool = False) -> SeriesInT:
    """Power series of ``f`` in ``Y`` truncated after ``Y^K``.

    With ``integral=True`` every coefficient must be an integer Laurent
    polynomial in ``X`` (the contract for assembled zeta functions).
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    if f.is_zero():
        return SeriesInT([{} for _ in range(K + 1)], K)
    g = cancel_constant_factors(f)
    u, v = g.prefactor
    # work with Y-degrees shifted by v so negative starts are detected
    top = K - v
    if top < 0:
        return SeriesInT([{} for _ in range(K + 1)], K)
    acc: dict[Exponent, int] = {k: c for k, c in g.numer.terms.items() if k[1] <= top}
    for a, b in g.denom:
        # multiply by 1 + m + m^2 + ... with m = X^a Y^b truncated at Y^top
        new: dict[Exponent, int] = {}
        for (i, j), c in acc.items():
            n = 0
            while j + n * b <= top:
                k = (i + n * a, j + n * b)
                new[k] = new.get(k, 0) + c
                n += 1
        acc = {k: c for k, c in new.items() if c}
    rows: list[Laurent] = [{} for _ in range(K + 1)]
    for (i, j), c in acc.items():
        deg = j + v
        if deg < 0:
            raise NotExpandable(f"nonzero coefficient at Y^{deg}")
        val = g.scalar * c
        rows[deg][i + u] = rows[deg].get(i + u, 0) + val
    rows = [{i: Fraction(c) for i, c in r.items() if c} for r in rows]
    out = SeriesInT(rows, K)
    if integral and not out.is_integral():
        raise ValueError("series has non-integral coefficients")
    return out


def series_at_prime(f: GeoRatFun, p: int, K: int) -> list[int]:
    """Integer coefficients of ``f(p, T)`` up to ``T^K``."""
    return series_in_T(f, K).at_int(p)


# -- formatting ------------------------------------------------------------


def _mono(i: int, j: int, sep: str = "*") -> str:
    parts = []
    if i:
        parts.append("X" if i == 1 else f"X^{i}")
    if j:
        parts.append("Y" if j == 1 else f"Y^{j}")
    return sep.join(parts)


def poly_sort_key(k: Exponent):
    return (k[1], k[0])


def format_poly(p: BivarPoly | Mapping[Exponent, int], sep: str = "*") -> str:
    terms = p.terms if isinstance(p, BivarPoly) else p
    if not terms:
        return "0"
    out = ""
    for n, k in enumerate(sorted(terms, key=poly_sort_key)):
        c = terms[k]
        m = _mono(*k, sep=sep)
        mag = abs(c)
        body = m if (mag == 1 and m) else (f"{mag}{sep}{m}" if m else str(mag))
        if n == 0:
            out = ("-" if c < 0 else "") + body
        else:
            out += (" - " if c < 0 else " + ") + body
    return out


def format_geo(f: GeoRatFun) -> str:
    """Plain-text rendering, e.g. ``(1 + X^5*Y^5)/(1 - X^6*Y^5)``."""
    if f.is_zero():
        return "0"
    sign = "-" if f.scalar < 0 else ""
    mag = abs(f.scalar)
    pieces = []
    if mag != 1:
        pieces.append(f"({mag})" if mag.denominator != 1 else str(mag))
    pre = _mono(*f.prefactor)
    if pre:
        pieces.append(pre)
    if f.numer.terms != {(0, 0): 1}:
        pieces.append(f"({format_poly(f.numer)})")
    num = sign + ("*".join(pieces) if pieces else "1")
    if not f.denom:
        return num
    den = "".join(f"(1 - {_mono(a, b)})" for a, b in f.denom)
    return f"{num}/{den}" if len(f.denom) == 1 else f"{num}/({den})"
