import json
import random

import pytest
import sympy
from hypothesis import given, strategies as st

from nilzeta import intlat, liering as lr
from nilzeta.intlat import LatticeHNF


def _B(P, m):
    """Upper-right ``m x (d-m)`` block as sympy, in variables y1, y2, ..."""
    return P.M.to_sympy()[:m, m:]


def test_block_odd_shapes():
    y1, y2 = sympy.symbols("y1:3")
    P = lr.block_odd(1)
    assert (P.d, P.dprime) == (3, 2)
    assert _B(P, 2) == sympy.Matrix([[y2], [y1]])
    P = lr.block_odd(2)
    assert P.d == 5 and _B(P, 3).shape == (3, 2)


def test_block_even_shapes():
    y1, y2 = sympy.symbols("y1:3")
    P = lr.block_even([0])
    assert (P.d, P.dprime) == (2, 2)
    assert _B(P, 1) == sympy.Matrix([[y1]])
    a1, a2 = 3, -5
    B = _B(lr.block_even([a1, a2]), 2)
    assert list(B[:, 0]) == [y1 + a1 * y2, -a2 * y2]


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_block_even_determinant(a):
    y1, y2 = sympy.symbols("y1:3")
    B = _B(lr.block_even(a), 3)
    g = y1 ** 3 + a[0] * y1 ** 2 * y2 + a[1] * y1 * y2 ** 2 + a[2] * y2 ** 3
    assert sympy.expand(B.det() - g) == 0


def test_block_even_primary_part():
    b = lr.block_even([0, 2, 0, 1]).blocks[0]  # (t^2 + 1)^2
    assert (b.f, b.e) == ((1, 0, 1), 2)


def test_direct_sum():
    P = lr.direct_sum([lr.block_odd(1), lr.block_odd(1)])
    assert P.d == 6 and len(P.blocks) == 2
    with pytest.raises(ValueError):
        lr.direct_sum([])
    with pytest.raises(lr.MixedDerivedRank):
        lr.direct_sum([lr.block_odd(1), lr.from_R(lr.CONIC_R)])


def test_from_R():
    P = lr.from_R(lr.CONIC_R)
    assert P.d == 4 and P.dprime == 3
    with pytest.raises(ValueError):
        lr.from_R([[(1, 0, 0)]])


def test_fullness():
    assert lr.is_full(lr.block_odd(1))
    assert not lr.is_full(lr.abelian(5, 2))
    assert lr.is_full(lr.from_R(lr.CONIC_R))


def test_structure_constants_antisymmetric():
    P = lr.from_R(lr.dusautoy_R(1))
    rng = random.Random(1)
    for _ in range(20):
        u = [rng.randint(-3, 3) for _ in range(P.n)]
        v = [rng.randint(-3, 3) for _ in range(P.n)]
        assert lr.bracket(P, u, v) == [-c for c in lr.bracket(P, v, u)]


def test_ideal_examples():
    P = lr.block_odd(1)
    assert lr.is_ideal(P, LatticeHNF.standard(5))
    assert lr.is_ideal(P, LatticeHNF.standard(5).scaled(2))
    p = 3
    # x1, x2, x3, p*y1, y2: [x1, x3] = y1 is not in it... depends on the block
    L = LatticeHNF.from_generators([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0],
                                    [0, 0, 0, p, 0], [0, 0, 0, 0, 1]])
    y1_hit = any(P.M.entries[i][j][0] for i in range(3) for j in range(3))
    assert lr.is_ideal(P, L) == (not y1_hit)


def test_index_p_ideals_match_oracle():
    P = lr.block_odd(1)
    n = sum(1 for L in intlat.enumerate_hnf(5, 2, 1) if lr.is_ideal(P, L))
    assert n == lr.oracle_count(P, 2, 1)[1]


# frozen from exhaustive enumeration (fibered and full modes agree)
ORACLE = [
    (lambda: lr.block_odd(1), 2, [1, 7, 35, 179, 819]),
    (lambda: lr.block_odd(1), 3, [1, 13, 130, 1318, 12415]),
    (lambda: lr.block_even([0]), 3, [1, 13, 130, 1237, 11362, 102973]),
    (lambda: lr.abelian(3, 1), 2, [1, 7, 35, 155]),
]


@pytest.mark.parametrize("make,p,want", ORACLE)
def test_oracle_frozen(make, p, want):
    assert lr.oracle_count(make(), p, len(want) - 1) == want


@pytest.mark.parametrize("P", [lr.block_odd(1), lr.block_even([0]), lr.abelian(4, 2)])
def test_oracle_modes_agree(P):
    assert lr.oracle_count(P, 2, 3, mode="full") == lr.oracle_count(P, 2, 3)


def test_oracle_heisenberg():
    # ideals of the Heisenberg ring of index p^k, small k, against the known series
    # zeta = zeta(s) zeta(s-1) zeta(3s-2)
    P = lr.from_matrix([[[0], [1]], [[-1], [0]]], 1)
    p, K = 3, 4
    from nilzeta.ratfun import GeoRatFun, series_at_prime
    z = GeoRatFun.geometric(0, 1) * GeoRatFun.geometric(1, 1) * GeoRatFun.geometric(2, 3)
    assert lr.oracle_count(P, p, K) == series_at_prime(z, p, K)


def test_budget():
    with pytest.raises(lr.BudgetExceeded):
        lr.oracle_count(lr.block_odd(1), 7, 6, budget=1000)


def test_bad_primes():
    assert lr.bad_primes(lr.block_odd(1)) == {2}
    bad = lr.bad_primes(lr.from_R(lr.dusautoy_R(1)), scan_bound=30)
    assert 2 in bad and not {3, 5, 7} & bad
    mixed = lr.direct_sum([lr.block_even([0]), lr.block_even([-1])])
    assert lr.bad_primes(mixed) == {2}
    # t and t - 3 collide mod 3
    assert 3 in lr.bad_primes(lr.direct_sum([lr.block_even([0]), lr.block_even([-3])]))
    assert 2 in lr.bad_primes(lr.block_even([0, 1]))


def test_injectivity():
    assert lr.injectivity_primes(lr.block_even([0])) == set()
    assert lr.injectivity_primes(lr.abelian(3, 1)) is None


def test_parse_round_trip():
    for P in [lr.block_odd(2), lr.direct_sum([lr.block_even([1, 1]), lr.block_odd(1)]),
              lr.from_R(lr.CONIC_R), lr.from_matrix([[[0], [1]], [[-1], [0]]], 1)]:
        Q = lr.parse_presentation(json.loads(lr.dump_presentation(P)))
        assert Q == P


@pytest.mark.parametrize("data,loc", [
    ([], "<root>"),
    ({"blocks": [{"type": "odd", "r": 0}]}, "blocks[0].r"),
    ({"blocks": [{"type": "odd", "r": 1}, {"type": "even", "coeffs": [0, "x"]}]},
     "blocks[1].coeffs"),
    ({"blocks": [{"type": "weird"}]}, "blocks[0].type"),
    ({"R": [[[1, 0, 0]]]}, "R"),
    ({"R": [[[1, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]]]}, "R[0][0]"),
    ({"matrix": [[[0], [1]], [[1], [0]]], "dprime": 1}, "matrix"),
    ({"blocks": [{"type": "odd", "r": 1}], "R": []}, "<root>"),
])
def test_parse_errors(data, loc):
    with pytest.raises(lr.PresentationError) as exc:
        lr.parse_presentation(data)
    assert exc.value.location == loc


def test_load_reports_line(fixture_path):
    with pytest.raises(lr.PresentationError) as exc:
        lr.load_presentation(fixture_path("broken_syntax.yaml"))
    assert "broken_syntax.yaml:3:" in exc.value.location


def test_load_meta(fixture_path):
    P = lr.load_presentation(fixture_path("dusautoy.yaml"))
    assert P.meta["family"] == "dusautoy"
    assert P.R == lr.dusautoy_R(1)
