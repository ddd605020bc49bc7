"""Finite-field computations: P^1 roots, vanishing-set counts, plane-curve points.

Polynomials in one variable are integer coefficient lists, highest degree
first.  A polynomial ``f`` of nominal degree ``n = len(coeffs) - 1`` is
homogenised as ``g(y1, y2) = y2^n f(y1/y2)``; points of ``P^1(F_p)`` are
written ``(x, 1)`` for affine ``x`` and ``(1, 0)`` for infinity, which is a
root exactly when the leading coefficient vanishes mod ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import sympy


class BadPrime(ValueError):
    """The prime violates a good-reduction hypothesis."""


class RamifiedPrime(BadPrime):
    pass


INFINITY = (1, 0)


def _trim(coeffs: Sequence[int]) -> list[int]:
    c = list(coeffs)
    while len(c) > 1 and c[0] == 0:
        c.pop(0)
    return c


@dataclass(frozen=True)
class FpPoly:
    p: int
    coeffs: tuple[int, ...]

    @classmethod
    def reduce(cls, coeffs: Sequence[int], p: int) -> "FpPoly":
        return cls(p, tuple(_trim([c % p for c in coeffs])))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in self.coeffs:
            acc = (acc * x + c) % self.p
        return acc

    def derivative(self) -> "FpPoly":
        n = len(self.coeffs) - 1
        return FpPoly.reduce([c * (n - i) for i, c in enumerate(self.coeffs[:-1])] or [0], self.p)


def eval_homogeneous(coeffs: Sequence[int], point: tuple[int, int], p: int) -> int:
    """Value of the homogenisation of ``coeffs`` at ``point`` modulo ``p``."""
    y1, y2 = point
    n = len(coeffs) - 1
    return sum(c * pow(y1, n - i, p) * pow(y2, i, p) for i, c in enumerate(coeffs)) % p


def points_P1(p: int) -> list[tuple[int, int]]:
    return [(x, 1) for x in range(p)] + [INFINITY]


def roots_P1(coeffs: Sequence[int], p: int) -> set[tuple[int, int]]:
    return {pt for pt in points_P1(p) if eval_homogeneous(coeffs, pt, p) == 0}


def _multiple_root(coeffs: Sequence[int], pt: tuple[int, int], p: int) -> bool:
    if pt == INFINITY:
        # local parameter at infinity: the reversed polynomial at 0
        rev = list(coeffs)[::-1]
        return rev[-1] % p == 0 and (len(rev) < 2 or rev[-2] % p == 0)
    f = FpPoly.reduce(coeffs, p)
    return f(pt[0]) == 0 and f.derivative()(pt[0]) == 0


def discriminant(coeffs: Sequence[int]) -> int:
    t = sympy.Symbol("t")
    f = sympy.Poly(list(coeffs), t)
    if f.degree() < 1:
        raise ValueError("constant polynomial has no discriminant")
    if f.degree() == 1:
        return 1
    return int(sympy.discriminant(f))


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    t = sympy.Symbol("t")
    return int(sympy.resultant(sympy.Poly(list(f), t), sympy.Poly(list(g), t)))


def n_fp(coeffs: Sequence[int], p: int) -> int:
    """Number of distinct roots of ``f mod p`` in ``F_p`` (affine only)."""
    if discriminant(coeffs) % p == 0:
        raise RamifiedPrime(f"p={p} divides the discriminant of {list(coeffs)}")
    f = FpPoly.reduce(coeffs, p)
    return sum(1 for x in range(p) if f(x) == 0)


def c_pI(F: Sequence[Sequence[int]], p: int) -> dict[frozenset[int], int]:
    """Count points of ``P^1(F_p)`` by the exact set of ``f_i`` vanishing there.

    Indices in the returned subsets are 0-based positions in ``F``.  Raises
    ``BadPrime`` when two polynomials share a root mod ``p`` or a root is
    multiple (``RamifiedPrime``).
    """
    counts: dict[frozenset[int], int] = {}
    for pt in points_P1(p):
        I = frozenset(i for i, f in enumerate(F) if eval_homogeneous(f, pt, p) == 0)
        if len(I) > 1:
            raise BadPrime(f"root collision mod {p} at {pt} for polynomials {sorted(I)}")
        for i in I:
            if _multiple_root(F[i], pt, p):
                raise RamifiedPrime(f"multiple root of polynomial {i} mod {p} at {pt}")
        counts[I] = counts.get(I, 0) + 1
    assert sum(counts.values()) == p + 1
    return counts


# -- plane curves ------------------------------------------------------------

Y1, Y2, Y3 = sympy.symbols("y1 y2 y3")
_YS = (Y1, Y2, Y3)


@dataclass(frozen=True)
class CurveSpec:
    """Plane curve ``det R(y) = 0`` for a square matrix of linear forms in
    three variables.  ``R[i][j]`` is the coefficient vector of the entry."""

    R: tuple[tuple[tuple[int, int, int], ...], ...]

    def __post_init__(self):
        r = len(self.R)
        if r < 2:
            raise ValueError("R must be at least 2x2")
        for row in self.R:
            if len(row) != r or any(len(e) != 3 for e in row):
                raise ValueError("R must be square with length-3 coefficient vectors")

    @classmethod
    def from_entries(cls, R) -> "CurveSpec":
        entries = getattr(R, "entries", R)
        return cls(tuple(tuple(tuple(int(c) for c in e) for e in row) for row in entries))

    @property
    def r(self) -> int:
        return len(self.R)

    @cached_property
    def det_expr(self) -> sympy.Expr:
        M = sympy.Matrix([[sum(c * y for c, y in zip(e, _YS)) for e in row] for row in self.R])
        return sympy.expand(M.det(method="berkowitz"))

    @cached_property
    def det_terms(self) -> dict[tuple[int, int, int], int]:
        if self.det_expr == 0:
            return {}
        poly = sympy.Poly(self.det_expr, *_YS)
        return {tuple(m): int(c) for m, c in poly.terms()}


def _eval_terms(terms, p: int, y1, y2, y3):
    out = np.zeros(np.broadcast(y1, y2, y3).shape, dtype=np.int64)
    for (i, j, k), c in terms.items():
        c %= p
        if not c:
            continue
        val = np.full(out.shape, c, dtype=np.int64)
        for base, e in ((y1, i), (y2, j), (y3, k)):
            for _ in range(e):
                val = (val * base) % p
        out = (out + val) % p
    return out


def _projective_charts(p: int):
    a, b = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    ones = np.ones_like(a)
    yield ones, a, b
    c = np.arange(p, dtype=np.int64)
    yield np.zeros_like(c), np.ones_like(c), c
    yield np.zeros(1, np.int64), np.zeros(1, np.int64), np.ones(1, np.int64)


def count_points_P2(cs: CurveSpec, p: int) -> int:
    """Number of points of ``P^2(F_p)`` on ``det R = 0`` (exhaustive)."""
    total = 0
    for y1, y2, y3 in _projective_charts(p):
        total += int(np.count_nonzero(_eval_terms(cs.det_terms, p, y1, y2, y3) == 0))
    return total


def _partials(cs: CurveSpec):
    F = cs.det_expr
    return [F] + [sympy.diff(F, y) for y in _YS]


def is_smooth_mod_p(cs: CurveSpec, p: int, method: str = "groebner") -> bool:
    """Whether the reduction of the curve mod ``p`` is a smooth curve.

    ``method="groebner"`` decides smoothness over the algebraic closure (the
    singular locus is empty on all three affine charts).  ``method="scan"``
    only looks for singular points defined over ``F_p``.
    """
    polys = _partials(cs)
    if all(c % p == 0 for c in cs.det_terms.values()):
        return False
    if method == "scan":
        terms = [sympy.Poly(q, *_YS).as_dict() if q != 0 else {} for q in polys]
        terms = [{k: int(v) for k, v in t.items()} for t in terms]
        for y1, y2, y3 in _projective_charts(p):
            sing = np.ones(np.broadcast(y1, y2, y3).shape, dtype=bool)
            for t in terms:
                sing &= _eval_terms(t, p, y1, y2, y3) == 0
            if sing.any():
                return False
        return True
    if method != "groebner":
        raise ValueError(f"unknown method {method!r}")
    for k in range(3):
        chart = [sympy.expand(q.subs(_YS[k], 1)) for q in polys]
        gens = [y for i, y in enumerate(_YS) if i != k]
        chart = [q for q in chart if sympy.Poly(q, *gens).trunc(p) != sympy.Poly(0, *gens)]
        if not chart:
            return False
        G = sympy.groebner(chart, *gens, modulus=p, order="grevlex")
        if list(G.exprs) != [1]:
            return False
    return True


def singular_prime_scan(cs: CurveSpec, bound: int) -> list[int]:
    """Primes ``p <= bound`` at which the curve has bad reduction."""
    return [p for p in sympy.primerange(2, bound + 1) if not is_smooth_mod_p(cs, p)]


def projective_points_P2(p: int):
    for a, b in itertools.product(range(p), repeat=2):
        yield (1, a, b)
    for c in range(p):
        yield (0, 1, c)
    yield (0, 0, 1)
