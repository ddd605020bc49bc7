"""Integer lattice primitives: Hermite and Smith normal forms.

Lattices are full-rank sublattices of ``Z^n`` given by row bases (rows
generate).  The Hermite normal form is upper triangular with positive
diagonal and entries above the diagonal reduced modulo the diagonal entry of
their column, which makes it a canonical label for the lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

Matrix = list[list[int]]


@dataclass(frozen=True)
class LatticeHNF:
    basis: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(self.n))

    @property
    def index(self) -> int:
        out = 1
        for d in self.diagonal:
            out *= d
        return out

    def rows(self) -> Matrix:
        return [list(r) for r in self.basis]

    @classmethod
    def from_generators(cls, rows: Sequence[Sequence[int]]) -> "LatticeHNF":
        return cls(tuple(tuple(r) for r in hnf(rows)))

    @classmethod
    def standard(cls, n: int) -> "LatticeHNF":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def scaled(self, c: int) -> "LatticeHNF":
        return LatticeHNF(tuple(tuple(c * x for x in r) for r in self.basis))

    def is_canonical(self) -> bool:
        n = self.n
        for i in range(n):
            d = self.basis[i][i]
            if d <= 0:
                return False
            for j in range(i):
                if self.basis[i][j] != 0:
                    return False
            for r in range(i):
                if not 0 <= self.basis[r][i] < d:
                    return False
        return True


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of a full-rank lattice.

    ``rows`` may contain more generators than the rank; the result is the
    square upper-triangular basis.  Raises ``ValueError`` if the rows do not
    span a finite-index sublattice.
    """
    A = [list(r) for r in rows]
    if not A:
        raise ValueError("no generators")
    n = len(A[0])
    m = len(A)
    for c in range(n):
        # gcd-combine the rows c..m-1 on column c into row c
        while True:
            nz = [i for i in range(c, m) if A[i][c] != 0]
            if not nz:
                raise ValueError("generators do not span a full-rank lattice")
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[c], A[piv] = A[piv], A[c]
            done = True
            for i in range(c + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[c][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[c])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[c][c] < 0:
            A[c] = [-a for a in A[c]]
        for r in range(c):
            q = A[r][c] // A[c][c]
            if q:
                A[r] = [a - q * b for a, b in zip(A[r], A[c])]
    for i in range(n, m):
        if any(A[i]):
            raise ValueError("internal error: leftover generator")
    return A[:n]


def member(L: LatticeHNF, v: Sequence[int]) -> bool:
    """Whether ``v`` lies in the row span of ``L`` (back-substitution)."""
    if len(v) != L.n:
        raise ValueError("dimension mismatch")
    w = list(v)
    B = L.basis
    for i in range(L.n):
        d = B[i][i]
        x = w[i]
        if x % d:
            return False
        q = x // d
        if q:
            row = B[i]
            for j in range(i, L.n):
                w[j] -= q * row[j]
    return True


def compositions(k: int, n: int) -> Iterator[tuple[int, ...]]:
    """Compositions of ``k`` into ``n`` nonnegative parts, lexicographically."""
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in compositions(k - first, n - 1):
            yield (first,) + rest


def hnf_with_diagonal(diag: Sequence[int]) -> Iterator[LatticeHNF]:
    """All HNF bases with the given diagonal, off-diagonal digits in
    lexicographic order (row by row)."""
    n = len(diag)
    slots = [(r, c) for r in range(n) for c in range(r + 1, n)]
    ranges = [range(diag[c]) for _, c in slots]
    for digits in itertools.product(*ranges):
        B = [[0] * n for _ in range(n)]
        for i in range(n):
            B[i][i] = diag[i]
        for (r, c), x in zip(slots, digits):
            B[r][c] = x
        yield LatticeHNF(tuple(tuple(row) for row in B))


def enumerate_hnf(n: int, p: int, k: int) -> Iterator[LatticeHNF]:
    """Every sublattice of ``Z^n`` of index ``p^k``, exactly once."""
    for exps in compositions(k, n):
        yield from hnf_with_diagonal([p ** e for e in exps])


def is_maximal(L: LatticeHNF, p: int) -> bool:
    """``L`` is not contained in ``p Z^n``, i.e. it is the largest lattice of
    its homothety class inside ``Z^n``."""
    return any(x % p for row in L.basis for x in row)


def enumerate_maximal_hnf(n: int, p: int, k: int) -> Iterator[LatticeHNF]:
    """Index-``p^k`` sublattices whose smallest elementary divisor is 1."""
    for L in enumerate_hnf(n, p, k):
        if is_maximal(L, p):
            yield L


def count_hnf(n: int, p: int, k: int) -> int:
    """Number of sublattices of ``Z^n`` of index ``p^k``."""
    # coefficient of T^k in prod_{i<n} 1/(1 - p^i T)
    coeffs = [1] + [0] * k
    for i in range(n):
        q = p ** i
        for j in range(1, k + 1):
            coeffs[j] += q * coeffs[j - 1]
    return coeffs[k]


# -- Smith normal form -----------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    divisors: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith(M: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form ``U M W = diag(d_1, ..., d_r)`` with ``d_i | d_{i+1}``.

    Divisors are listed in ascending order with zeros last; ``U`` and ``W``
    are unimodular.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    W = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in W:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    r = min(m, n)
    divisors = tuple(A[i][i] for i in range(r))
    return SnfResult(divisors, tuple(map(tuple, U)), tuple(map(tuple, W)))


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def det(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def valuation(x: int, p: int, cap: int | None = None) -> int:
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v


def local_divisor_exponents(M: Sequence[Sequence[int]], p: int, cap: int) -> list[int]:
    """p-adic elementary divisor exponents of ``M``, each truncated at ``cap``.

    Returns ``min(rows, cols)`` values in ascending order.  Exponents that
    reach ``cap`` (including those of a rank drop) are reported as ``cap``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    r = min(m, n)
    if cap <= 0 or r == 0:
        return [0] * r
    mod = p ** cap
    A = [[x % mod for x in row] for row in M]
    rows = list(range(m))
    cols = list(range(n))
    out = []
    while rows and cols and len(out) < r:
        best = None
        for i in rows:
            Ai = A[i]
            for j in cols:
                x = Ai[j]
                if x:
                    v = valuation(x, p, cap)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i0, j0 = best
        unit = A[i0][j0] // p ** v
        inv = pow(unit, -1, mod)
        pivot_row = A[i0]
        for i in rows:
            if i == i0:
                continue
            x = A[i][j0]
            if x:
                q = (x // p ** v) * inv % mod
                Ai = A[i]
                for j in cols:
                    if pivot_row[j]:
                        Ai[j] = (Ai[j] - q * pivot_row[j]) % mod
        out.append(v)
        rows.remove(i0)
        cols.remove(j0)
    out.extend([cap] * (r - len(out)))
    return sorted(out)


def edtype(L: LatticeHNF, p: int) -> tuple[int, ...]:
    """Elementary divisor exponents of a ``p``-power index lattice, descending."""
    k = valuation(L.index, p)
    return tuple(sorted(local_divisor_exponents(L.basis, p, k + 1), reverse=True))
