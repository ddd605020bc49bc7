"""Vertex walks on the building of the derived lattice.

Homothety classes of lattices in ``Z_p^{d'}`` are represented by their
maximal member inside ``Z^{d'}``.  Each class carries two weights: ``w`` is
the log-index of the maximal member, and ``wprime`` adds the log-index of the
largest abelian part compatible with it.  Summing ``p^{w d} T^{wprime}`` over
classes gives the series ``A(p, T)`` from which the ideal zeta function is
rebuilt by multiplying with two abelian factors.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import sympy

from . import intlat
from .intlat import LatticeHNF
from .liering import Presentation, phi_injective_mod
from .ratfun import GeoRatFun, geo_product

log = logging.getLogger(__name__)


class NotFull(ValueError):
    pass


@dataclass(frozen=True)
class VertexClass:
    lattice: LatticeHNF
    edtype: tuple[int, ...]
    w: int
    wprime: int


@dataclass
class ASeries:
    """Truncated ``A(p, T)`` at a numeric prime.

    ``max_w`` is the largest log-index enumerated; ``rho`` the rank bound used
    to prove that every class with ``wprime <= K`` was visited.
    """

    p: int
    K: int
    coeffs: list[int]
    max_w: int
    rho: int
    vertices: int


def alpha_from_lattice(Mder: LatticeHNF, p: int) -> tuple[tuple[int, ...], list[list[int]]]:
    """Elementary divisor exponents (descending) and a unimodular ``alpha``
    with ``rowspan(Mder * alpha) = rowspan(diag(p^{r_1}, ..., p^{r_n}))``."""
    snf = intlat.smith(Mder.basis)
    n = Mder.n
    exps = [intlat.valuation(dv, p) for dv in snf.divisors]
    order = list(range(n))[::-1]
    alpha = [[snf.right[i][j] for j in order] for i in range(n)]
    return tuple(exps[j] for j in order), alpha


def _column(A: Sequence[Sequence[int]], j: int) -> list[int]:
    return [row[j] for row in A]


def weight_wprime(P: Presentation, Mder: LatticeHNF, p: int, strict: bool = False) -> int:
    """``w`` plus the log-index of the largest abelian part admissible for
    the class of ``Mder``.

    Stacks ``p^{r_1 - r_i} M(alpha^i)`` for ``i < d'`` side by side and reads
    the elementary divisors modulo ``p^{r_1}``.
    """
    edt, alpha = alpha_from_lattice(Mder, p)
    w = sum(edt)
    r1 = edt[0] if edt else 0
    if r1 == 0 or P.dprime < 2:
        return w
    B = [[] for _ in range(P.d)]
    for i in range(P.dprime - 1):
        scale = p ** (r1 - edt[i])
        Mi = P.M.evaluate(_column(alpha, i))
        for row, mrow in zip(B, Mi):
            row.extend(scale * x for x in mrow)
    cap = r1 + 1 if strict else r1
    e = intlat.local_divisor_exponents(B, p, cap)
    e += [cap] * (P.d - len(e))
    if strict and any(x > r1 for x in e):
        raise NotFull(f"elementary divisor beyond p^{r1} for {Mder.basis}")
    return w + sum(r1 - min(x, r1) for x in e)


def index_of_X(P: Presentation, Lp: LatticeHNF, p: int) -> int:
    """Log-index of ``{x : [x, x_j] in Lp for all j}`` in ``Z_p^d``.

    Computed from ``x C_j adj(H) = 0 mod det H`` without the building
    coordinates; used as an independent check of ``weight_wprime``.
    """
    H = sympy.Matrix(Lp.basis)
    k = intlat.valuation(Lp.index, p)
    if k == 0:
        return 0
    adj = H.adjugate()
    blocks = []
    for Cj in P.structure.C:
        blocks.append(sympy.Matrix(Cj) * adj)
    N = sympy.Matrix.hstack(*blocks)
    rows = [[int(x) for x in N.row(i)] for i in range(N.rows)]
    e = intlat.local_divisor_exponents(rows, p, k)
    e += [k] * (P.d - len(e))
    return sum(k - min(x, k) for x in e)


def projective_points(n: int, p: int) -> Iterator[tuple[int, ...]]:
    """Representatives of ``P^{n-1}(F_p)`` with first nonzero coordinate 1."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def rank_lower_bound(P: Presentation, p: int) -> int:
    """Minimum over ``y`` in ``P^{d'-1}(F_p)`` of the rank of ``M(y)`` mod p."""
    best = P.d
    for y in projective_points(P.dprime, p):
        M = P.M.evaluate(y)
        rk = intlat.local_divisor_exponents(M, p, 1).count(0) if P.d else 0
        best = min(best, rk)
        if best == 0:
            break
    return best


def _type_allowed(edt: Sequence[int], rho: int, K: int) -> bool:
    return sum(edt) + rho * (edt[0] if edt else 0) <= K


def _max_w(dprime: int, rho: int, K: int) -> int:
    """Largest ``w`` with some elementary-divisor type passing the bound."""
    if dprime < 2:
        return 0
    w = 0
    while True:
        r1 = -(-(w + 1) // (dprime - 1))
        if w + 1 + rho * r1 > K:
            return w
        w += 1


def _vertices_at(P: Presentation, p: int, w: int, rho: int, K: int) -> list[VertexClass]:
    out = []
    for L in intlat.enumerate_maximal_hnf(P.dprime, p, w):
        edt = intlat.edtype(L, p)
        if not _type_allowed(edt, rho, K):
            continue
        wp = weight_wprime(P, L, p)
        if wp < w + rho * edt[0]:
            raise AssertionError(f"rank bound violated at {L.basis}")
        if wp <= K:
            out.append(VertexClass(L, edt, w, wp))
    return out


def vertices(P: Presentation, p: int, K: int, bound: str = "rank",
             jobs: int = 1) -> Iterator[VertexClass]:
    """All vertex classes with ``wprime <= K``, ordered by ``w`` then HNF."""
    rho = _bound_rho(P, p, bound)
    ws = list(range(_max_w(P.dprime, rho, K) + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = ex.map(_vertices_at, *zip(*[(P, p, w, rho, K) for w in ws]))
            for chunk in chunks:
                yield from chunk
    else:
        for w in ws:
            yield from _vertices_at(P, p, w, rho, K)


def _bound_rho(P: Presentation, p: int, bound: str) -> int:
    if bound == "trivial":
        return 0
    if bound == "rank":
        return rank_lower_bound(P, p)
    raise ValueError(f"unknown bound {bound!r}")


def building_series(P: Presentation, p: int, K: int, bound: str = "rank",
                    jobs: int = 1) -> ASeries:
    if not phi_injective_mod(P, p):
        log.warning("bracket map is not injective mod %d; the walk does not describe the ideal count", p)
    rho = _bound_rho(P, p, bound)
    coeffs = [0] * (K + 1)
    n = 0
    for v in vertices(P, p, K, bound, jobs):
        coeffs[v.wprime] += p ** (v.w * P.d)
        n += 1
    return ASeries(p, K, coeffs, _max_w(P.dprime, rho, K), rho, n)


def abelian_zeta(d: int) -> GeoRatFun:
    """``prod_{i<d} 1/(1 - X^i Y)``: sublattices of ``Z^d``."""
    return geo_product(GeoRatFun.geometric(i, 1) for i in range(d))


def abelian_factors(d: int, dprime: int) -> GeoRatFun:
    return abelian_zeta(d) * GeoRatFun.geometric(d * dprime, d + dprime)


def _series_of_factors(p: int, d: int, dprime: int, K: int) -> list[int]:
    out = [1] + [0] * K
    for a, b in [(i, 1) for i in range(d)] + [(d * dprime, d + dprime)]:
        q = p ** a
        for k in range(b, K + 1):
            out[k] += q * out[k - b]
    return out


def convolve(a: Sequence[int], b: Sequence[int], K: int) -> list[int]:
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(K + 1)]


def assemble_zeta(A, d: int, dprime: int):
    """Multiply ``A`` by the two abelian factors.

    A ``GeoRatFun`` gives a ``GeoRatFun``; an ``ASeries`` gives the list of
    ideal counts ``a_{p^k}`` for ``k <= K``.
    """
    if isinstance(A, GeoRatFun):
        return abelian_factors(d, dprime) * A
    if isinstance(A, ASeries):
        return convolve(_series_of_factors(A.p, d, dprime, A.K), A.coeffs, A.K)
    raise TypeError(f"cannot assemble from {type(A).__name__}")
