"""Class-2 Lie rings given by antisymmetric matrices of linear forms.

A presentation of rank ``(d, d')`` is the ring ``Z^{d+d'}`` with basis
``x_1..x_d, y_1..y_{d'}``, bracket ``[x_i, x_j] = M(y)_{ij}`` and the
``y_k`` central.  Coordinates always list the ``x`` block first.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

import sympy
import yaml

from . import intlat
from .intlat import LatticeHNF
from .modcurves import CurveSpec, discriminant, resultant, singular_prime_scan

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 3_000_000


class BadCoefficients(ValueError):
    pass


class MixedDerivedRank(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class PresentationError(ValueError):
    """Malformed presentation input; ``location`` names the offending field."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


LinearForm = tuple[int, ...]


@dataclass(frozen=True)
class LinearFormMatrix:
    entries: tuple[tuple[LinearForm, ...], ...]
    nvars: int
    antisymmetric: bool = True

    def __post_init__(self):
        d = len(self.entries)
        for row in self.entries:
            if len(row) != d:
                raise ValueError("matrix of linear forms must be square")
            for e in row:
                if len(e) != self.nvars:
                    raise ValueError(f"linear form {e} does not have {self.nvars} coefficients")
        if self.antisymmetric:
            for i in range(d):
                if any(self.entries[i][i]):
                    raise ValueError("antisymmetric matrix needs a zero diagonal")
                for j in range(i):
                    if tuple(-c for c in self.entries[j][i]) != self.entries[i][j]:
                        raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")

    @classmethod
    def build(cls, rows: Sequence[Sequence[Sequence[int]]], nvars: int | None = None,
              antisymmetric: bool = True) -> "LinearFormMatrix":
        if nvars is None:
            nvars = len(rows[0][0]) if rows and rows[0] else 0
        return cls(tuple(tuple(tuple(int(c) for c in e) for e in row) for row in rows),
                   nvars, antisymmetric)

    @classmethod
    def zero(cls, d: int, nvars: int) -> "LinearFormMatrix":
        z = (0,) * nvars
        return cls(tuple((z,) * d for _ in range(d)), nvars)

    @property
    def d(self) -> int:
        return len(self.entries)

    def evaluate(self, y: Sequence[int]) -> list[list[int]]:
        return [[sum(c * t for c, t in zip(e, y)) for e in row] for row in self.entries]

    def to_sympy(self, symbols=None) -> sympy.Matrix:
        ys = symbols or sympy.symbols(f"y1:{self.nvars + 1}")
        return sympy.Matrix([[sum(c * y for c, y in zip(e, ys)) for e in row]
                             for row in self.entries])


@dataclass(frozen=True)
class OddBlock:
    r: int

    def describe(self) -> dict:
        return {"type": "odd", "r": self.r}


@dataclass(frozen=True)
class EvenBlock:
    """``g = f^e`` homogenised; ``coeffs`` are ``a_1..a_r`` of the monic ``g``."""

    coeffs: tuple[int, ...]
    f: tuple[int, ...]
    e: int

    @property
    def g(self) -> tuple[int, ...]:
        return (1,) + self.coeffs

    def describe(self) -> dict:
        return {"type": "even", "coeffs": list(self.coeffs)}


Block = OddBlock | EvenBlock


@dataclass(frozen=True)
class StructureConstants:
    """``C[j]`` is ``d x d'``; row ``i`` holds ``[x_i, x_j]`` in the y-basis."""

    C: tuple[tuple[tuple[int, ...], ...], ...]

    def image(self, v: Sequence[int], j: int) -> list[int]:
        """``[v, x_j]`` for ``v`` in the x-block."""
        Cj = self.C[j]
        out = [0] * len(Cj[0]) if Cj else []
        for vi, row in zip(v, Cj):
            if vi:
                for k, c in enumerate(row):
                    out[k] += vi * c
        return out

    def stacked(self) -> list[list[int]]:
        """``d x (d d')`` matrix of ``v -> ([v, x_j])_j``."""
        d = len(self.C)
        return [[c for j in range(d) for c in self.C[j][i]] for i in range(d)]


@dataclass(frozen=True)
class Presentation:
    d: int
    dprime: int
    M: LinearFormMatrix
    blocks: tuple[Block, ...] | None = None
    R: LinearFormMatrix | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.M.d != self.d or self.M.nvars != self.dprime:
            raise ValueError("matrix shape does not match (d, d')")

    @property
    def n(self) -> int:
        return self.d + self.dprime

    @cached_property
    def structure(self) -> StructureConstants:
        return structure_constants(self)

    def with_meta(self, **kw) -> "Presentation":
        return Presentation(self.d, self.dprime, self.M, self.blocks, self.R, {**self.meta, **kw})


# -- constructors ------------------------------------------------------------


def _hyperbolic(B: list[list[LinearForm]], nvars: int) -> LinearFormMatrix:
    """``[[0, B], [-B^t, 0]]``."""
    m, k = len(B), len(B[0])
    z = (0,) * nvars
    d = m + k
    rows = [[z] * d for _ in range(d)]
    for i in range(m):
        for j in range(k):
            rows[i][m + j] = tuple(B[i][j])
            rows[m + j][i] = tuple(-c for c in B[i][j])
    return LinearFormMatrix.build(rows, nvars)


def block_odd(r: int) -> Presentation:
    if r < 1:
        raise ValueError("odd block needs r >= 1")
    Y1, Y2, Z = (1, 0), (0, 1), (0, 0)
    B = [[Z] * r for _ in range(r + 1)]
    for i in range(r):
        B[i][i] = Y2
        B[i + 1][i] = Y1
    return Presentation(2 * r + 1, 2, _hyperbolic(B, 2), (OddBlock(r),))


def _primary_decomposition(g: Sequence[int]) -> tuple[tuple[int, ...], int]:
    t = sympy.Symbol("t")
    _, factors = sympy.factor_list(sympy.Poly(list(g), t))
    if len(factors) != 1:
        return tuple(g), 1
    f, e = factors[0]
    return tuple(int(c) for c in f.all_coeffs()), int(e)


def block_even(coeffs: Sequence[int]) -> Presentation:
    """Block whose hyperbolic part has determinant ``y1^r + a_1 y1^{r-1} y2 + ...``."""
    a = [int(c) for c in coeffs]
    r = len(a)
    if r < 1:
        raise ValueError("even block needs at least one coefficient")
    B = [[[0, 0] for _ in range(r)] for _ in range(r)]
    B[0][0] = [1, a[0]]
    for i in range(r):
        if i > 0:
            B[i][0][1] += (-1) ** i * a[i]
            B[i][i][0] += 1
        if i + 1 < r:
            B[i][i + 1] = [0, 1]
    B = [[tuple(e) for e in row] for row in B]
    y1, y2 = sympy.symbols("y1 y2")
    Bs = sympy.Matrix([[e[0] * y1 + e[1] * y2 for e in row] for row in B])
    g = y1 ** r + sum(c * y1 ** (r - 1 - i) * y2 ** (i + 1) for i, c in enumerate(a))
    if sympy.expand(Bs.det(method="berkowitz") - g) != 0:
        raise BadCoefficients(f"determinant of the block does not reproduce g for {a}")
    f, e = _primary_decomposition([1] + a)
    return Presentation(2 * r, 2, _hyperbolic(B, 2), (EvenBlock(tuple(a), f, e),))


def direct_sum(parts: Sequence[Presentation]) -> Presentation:
    parts = list(parts)
    if not parts:
        raise ValueError("direct sum of no blocks")
    dp = parts[0].dprime
    if any(P.dprime != dp for P in parts):
        raise MixedDerivedRank("blocks have different derived ranks")
    d = sum(P.d for P in parts)
    z = (0,) * dp
    rows = [[z] * d for _ in range(d)]
    off = 0
    for P in parts:
        for i in range(P.d):
            for j in range(P.d):
                rows[off + i][off + j] = P.M.entries[i][j]
        off += P.d
    blocks = None
    if all(P.blocks is not None for P in parts):
        blocks = tuple(b for P in parts for b in P.blocks)
    return Presentation(d, dp, LinearFormMatrix.build(rows, dp), blocks)


def from_R(R: LinearFormMatrix | Sequence) -> Presentation:
    if not isinstance(R, LinearFormMatrix):
        R = LinearFormMatrix.build(R, 3, antisymmetric=False)
    if R.nvars != 3:
        raise ValueError("R must have entries in three variables")
    if R.d < 2:
        raise ValueError("R must be at least 2x2")
    M = _hyperbolic([list(row) for row in R.entries], 3)
    return Presentation(2 * R.d, 3, M, None, R)


def from_matrix(rows: Sequence, dprime: int | None = None) -> Presentation:
    M = LinearFormMatrix.build(rows, dprime)
    return Presentation(M.d, M.nvars, M)


def abelian(n: int, dprime: int = 1) -> Presentation:
    """``Z^n`` with zero bracket, split as ``d = n - d'`` plus ``d'``."""
    return Presentation(n - dprime, dprime, LinearFormMatrix.zero(n - dprime, dprime))


def dusautoy_R(D: int) -> LinearFormMatrix:
    return LinearFormMatrix.build(
        [[(0, 0, D), (1, 0, 0), (0, 1, 0)],
         [(1, 0, 0), (0, 0, 1), (0, 0, 0)],
         [(0, 1, 0), (0, 0, 0), (1, 0, 0)]], 3, antisymmetric=False)


CONIC_R = LinearFormMatrix.build([[(1, 0, 0), (0, 1, 0)], [(0, 1, 0), (0, 0, 1)]], 3,
                                 antisymmetric=False)


# -- brackets and ideals -----------------------------------------------------


def structure_constants(P: Presentation) -> StructureConstants:
    E = P.M.entries
    return StructureConstants(tuple(tuple(E[i][j] for i in range(P.d)) for j in range(P.d)))


def bracket(P: Presentation, u: Sequence[int], v: Sequence[int]) -> list[int]:
    """Bracket of two vectors of ``Z^{d+d'}``; only the x-parts matter."""
    out = [0] * P.dprime
    E = P.M.entries
    for i in range(P.d):
        if not u[i]:
            continue
        for j in range(P.d):
            if v[j]:
                c = u[i] * v[j]
                for k, m in enumerate(E[i][j]):
                    out[k] += c * m
    return out


def bracket_images(P: Presentation) -> list[list[int]]:
    return [list(P.M.entries[i][j]) for i in range(P.d) for j in range(i + 1, P.d)]


def _rank_Q(rows: list[list[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


def is_full(P: Presentation) -> bool:
    return _rank_Q(bracket_images(P)) == P.dprime


def _divisor_primes(rows: list[list[int]], rank: int) -> set[int]:
    """Primes at which the rank of ``rows`` drops below ``rank``."""
    out: set[int] = set()
    if not rows:
        return out
    snf = intlat.smith(rows)
    for dv in snf.divisors[:rank]:
        if dv == 0:
            continue
        out |= set(sympy.factorint(dv))
    return out


def injectivity_primes(P: Presentation) -> set[int] | None:
    """Primes where ``v -> ([v, x_j])_j`` is not injective mod p.

    ``None`` means it is not injective over Q, so no prime is good.
    """
    S = P.structure.stacked()
    if _rank_Q(S) < P.d:
        return None
    return _divisor_primes(S, P.d)


def phi_injective_mod(P: Presentation, p: int) -> bool:
    bad = injectivity_primes(P)
    return bad is not None and p not in bad


def is_ideal(P: Presentation, L: LatticeHNF) -> bool:
    """Whether the sublattice ``L`` of ``Z^{d+d'}`` is closed under bracketing
    with the ring."""
    if L.n != P.n:
        raise ValueError("lattice rank does not match the ring")
    S = P.structure
    zeros = [0] * P.d
    for row in L.basis:
        u = row[:P.d]
        if not any(u):
            continue
        for j in range(P.d):
            w = S.image(u, j)
            if any(w) and not intlat.member(L, zeros + w):
                return False
    return True


# -- brute-force oracle -------------------------------------------------------


def estimate_work(P: Presentation, p: int, kmax: int, mode: str = "fibered") -> int:
    if mode == "full":
        return sum(intlat.count_hnf(P.n, p, k) for k in range(kmax + 1))
    return sum(intlat.count_hnf(P.d, p, a) * intlat.count_hnf(P.dprime, p, k - a)
               for k in range(kmax + 1) for a in range(k + 1))


def _member_y(Lp: LatticeHNF, w: list[int]) -> bool:
    return intlat.member(Lp, w)


def _fiber_count(P: Presentation, p: int, a: int, b: int) -> int:
    """Ideals whose abelian part has index ``p^a`` and derived part ``p^b``.

    Each admissible pair lifts to ``|Z^{d'} : L'|^d`` ideals (the free choice
    of the upper-right block of the Hermite form).
    """
    S = P.structure
    derived = list(intlat.enumerate_hnf(P.dprime, p, b))
    lift = p ** (b * P.d)
    total = 0
    for Lab in intlat.enumerate_hnf(P.d, p, a):
        imgs = []
        for row in Lab.basis:
            for j in range(P.d):
                w = S.image(row, j)
                if any(w):
                    imgs.append(w)
        for Lp in derived:
            if all(_member_y(Lp, w) for w in imgs):
                total += lift
    return total


def _full_count(P: Presentation, p: int, k: int) -> int:
    return sum(1 for L in intlat.enumerate_hnf(P.n, p, k) if is_ideal(P, L))


def oracle_count(P: Presentation, p: int, kmax: int, *, mode: str = "fibered",
                 budget: int = DEFAULT_BUDGET, jobs: int = 1) -> list[int]:
    """Number of ideals of index ``p^k`` for ``k = 0..kmax`` by enumeration.

    ``mode="full"`` filters every Hermite form of ``Z^{d+d'}``;
    ``mode="fibered"`` enumerates pairs (abelian part, derived part) and is
    exponentially cheaper.  Both count the same thing.
    """
    if mode not in ("fibered", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    work = estimate_work(P, p, kmax, mode)
    if work > budget:
        raise BudgetExceeded(f"about {work} lattices to test, budget is {budget}")
    if mode == "full":
        tasks = [(P, p, k) for k in range(kmax + 1)]
        fn = _full_count
    else:
        tasks = [(P, p, a, k - a) for k in range(kmax + 1) for a in range(k + 1)]
        fn = _fiber_count
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(fn, *zip(*tasks)))
    else:
        results = [fn(*t) for t in tasks]
    out = [0] * (kmax + 1)
    for t, c in zip(tasks, results):
        k = t[2] if mode == "full" else t[2] + t[3]
        out[k] += c
    return out


# -- primes ------------------------------------------------------------------


def even_polynomials(P: Presentation) -> list[tuple[int, ...]]:
    """Distinct primitive polynomials ``f`` of the even blocks, in order."""
    seen: list[tuple[int, ...]] = []
    for b in P.blocks or ():
        if isinstance(b, EvenBlock) and b.f not in seen:
            seen.append(b.f)
    return seen


def bad_primes(P: Presentation, scan_bound: int = 100) -> set[int]:
    """A conservative set of primes excluded from closed-form comparisons.

    For presentations built from a matrix ``R`` the curve is checked for bad
    reduction at every prime up to ``scan_bound`` only.
    """
    bad = {2}
    inj = injectivity_primes(P)
    if inj is None:
        raise ValueError("the bracket map v -> ([v, x_j])_j is not injective")
    bad |= inj
    images = bracket_images(P)
    if _rank_Q(images) == P.dprime:
        bad |= _divisor_primes(images, P.dprime)
    polys = even_polynomials(P)
    for f in polys:
        if len(f) > 2:
            bad |= set(sympy.factorint(abs(discriminant(f))))
        bad |= set(sympy.factorint(abs(f[0])))
    for i, f in enumerate(polys):
        for g in polys[i + 1:]:
            res = resultant(f, g)
            if res == 0:
                raise ValueError(f"polynomials {f} and {g} share a factor")
            bad |= set(sympy.factorint(abs(res)))
    if P.R is not None:
        r = P.R.d
        bad |= {q for q in sympy.primerange(2, r) if q + 1 <= r}
        bad |= set(singular_prime_scan(CurveSpec.from_entries(P.R), scan_bound))
    bad.discard(1)
    return bad


# -- input files -------------------------------------------------------------


def _expect(cond: bool, msg: str, loc: str):
    if not cond:
        raise PresentationError(msg, loc)


def _int_list(x: Any, loc: str) -> list[int]:
    _expect(isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x),
            "expected a list of integers", loc)
    return list(x)


def _form_matrix(x: Any, nvars: int | None, loc: str, square: bool = True) -> list:
    _expect(isinstance(x, list) and x, "expected a non-empty list of rows", loc)
    n = len(x)
    for i, row in enumerate(x):
        _expect(isinstance(row, list) and (len(row) == n or not square),
                f"row must have {n} entries", f"{loc}[{i}]")
        for j, e in enumerate(row):
            e = _int_list(e, f"{loc}[{i}][{j}]")
            if nvars is not None:
                _expect(len(e) == nvars, f"linear form needs {nvars} coefficients",
                        f"{loc}[{i}][{j}]")
    return x


def parse_presentation(data: Any) -> Presentation:
    """Build a presentation from decoded YAML/JSON data."""
    _expect(isinstance(data, dict), "top level must be a mapping", "<root>")
    meta = {k: data[k] for k in ("family", "closed_form", "name") if k in data}
    kinds = [k for k in ("blocks", "matrix", "M", "R") if k in data]
    _expect(len(kinds) == 1, "exactly one of blocks, matrix, R is required", "<root>")
    kind = kinds[0]
    dprime = data.get("dprime")
    if dprime is not None:
        _expect(isinstance(dprime, int) and dprime >= 1, "must be a positive integer", "dprime")
    if kind == "blocks":
        blocks = data["blocks"]
        _expect(isinstance(blocks, list) and blocks, "expected a non-empty list", "blocks")
        parts = []
        for i, b in enumerate(blocks):
            loc = f"blocks[{i}]"
            _expect(isinstance(b, dict) and "type" in b, "block needs a type", loc)
            if b["type"] == "odd":
                r = b.get("r")
                _expect(isinstance(r, int) and r >= 1, "r must be a positive integer", loc + ".r")
                parts.append(block_odd(r))
            elif b["type"] == "even":
                coeffs = _int_list(b.get("coeffs"), loc + ".coeffs")
                _expect(len(coeffs) >= 1, "at least one coefficient", loc + ".coeffs")
                try:
                    parts.append(block_even(coeffs))
                except BadCoefficients as exc:
                    raise PresentationError(str(exc), loc) from exc
            else:
                raise PresentationError(f"unknown block type {b['type']!r}", loc + ".type")
        if dprime is not None:
            _expect(dprime == 2, "block presentations have dprime 2", "dprime")
        P = direct_sum(parts)
    elif kind == "R":
        _form_matrix(data["R"], 3, "R")
        _expect(len(data["R"]) >= 2, "R must be at least 2x2", "R")
        if dprime is not None:
            _expect(dprime == 3, "R presentations have dprime 3", "dprime")
        P = from_R(data["R"])
    else:
        rows = _form_matrix(data[kind], dprime, kind)
        try:
            P = from_matrix(rows, dprime)
        except ValueError as exc:
            raise PresentationError(str(exc), kind) from exc
    return P.with_meta(**meta) if meta else P


def load_presentation(path: str | Path) -> Presentation:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PresentationError(str(exc), str(path)) from exc
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise PresentationError(exc.problem or "syntax error", where) from exc
    except yaml.YAMLError as exc:
        raise PresentationError(str(exc), str(path)) from exc
    try:
        return parse_presentation(data)
    except PresentationError as exc:
        raise PresentationError(str(exc), str(path)) from exc


def dump_presentation(P: Presentation) -> str:
    """JSON text that ``parse_presentation`` maps back to ``P``."""
    if P.blocks is not None:
        data: dict = {"dprime": P.dprime, "blocks": [b.describe() for b in P.blocks]}
    elif P.R is not None:
        data = {"dprime": 3, "R": [[list(e) for e in row] for row in P.R.entries]}
    else:
        data = {"dprime": P.dprime, "matrix": [[list(e) for e in row] for row in P.M.entries]}
    data.update(P.meta)
    return json.dumps(data)


def iter_blocks(P: Presentation) -> Iterable[Block]:
    return iter(P.blocks or ())
