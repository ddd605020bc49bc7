import random

import pytest
from hypothesis import given, strategies as st

from nilzeta import building as bd, cones, intlat, liering as lr
from nilzeta.intlat import LatticeHNF
from nilzeta.ratfun import GeoRatFun, geo_equal, series_at_prime


def span_equal(A, B):
    return LatticeHNF.from_generators(A) == LatticeHNF.from_generators(B)


def check_alpha(L, p):
    edt, alpha = bd.alpha_from_lattice(L, p)
    assert abs(intlat.det(alpha)) == 1
    D = [[p ** edt[i] if i == j else 0 for j in range(L.n)] for i in range(L.n)]
    assert span_equal(intlat.matmul(L.rows(), alpha), D)
    return edt, alpha


def test_alpha_diagonal():
    p = 3
    L = LatticeHNF.from_generators([[p ** 2, 0], [0, 1]])
    edt, _ = check_alpha(L, p)
    assert edt == (2, 0)


def test_alpha_index_p():
    edt, _ = check_alpha(LatticeHNF.from_generators([[3, 1], [0, 1]]), 3)
    assert edt == (1, 0)


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.integers(0, 4))
def test_alpha_maximal_lattices(seed, p, w):
    Ls = list(intlat.enumerate_maximal_hnf(3, p, w))
    L = random.Random(seed).choice(Ls)
    edt, _ = check_alpha(L, p)
    assert edt == intlat.edtype(L, p) and sum(edt) == w


@pytest.mark.parametrize("P,p,w", [
    (lr.block_odd(1), 3, 3),
    (lr.block_even([0]), 3, 3),
    (lr.from_R(lr.CONIC_R), 3, 3),
    (lr.from_R(lr.dusautoy_R(1)), 5, 2),
])
def test_wprime_matches_ideal_index(P, p, w):
    """``w' - w`` equals the log-index of the abelian part read directly off
    the Hermite form of the derived lattice."""
    for k in range(w + 1):
        for L in intlat.enumerate_maximal_hnf(P.dprime, p, k):
            assert bd.weight_wprime(P, L, p) - k == bd.index_of_X(P, L, p)


def test_index_of_X_scales():
    P, p = lr.from_R(lr.CONIC_R), 3
    for L in intlat.enumerate_maximal_hnf(3, p, 2):
        assert bd.index_of_X(P, L.scaled(p), p) == bd.index_of_X(P, L, p) + P.d


def test_rank_lower_bounds():
    assert bd.rank_lower_bound(lr.block_odd(1), 3) == 2
    assert bd.rank_lower_bound(lr.from_R(lr.CONIC_R), 5) == 2
    assert bd.rank_lower_bound(lr.from_R(lr.dusautoy_R(1)), 5) == 4
    assert bd.rank_lower_bound(lr.block_even([0]), 3) == 0


@pytest.mark.parametrize("P,p,K", [
    (lr.block_odd(1), 3, 6),
    (lr.from_R(lr.CONIC_R), 3, 4),
    (lr.direct_sum([lr.block_even([0]), lr.block_odd(1)]), 3, 5),
])
def test_rank_bound_matches_trivial(P, p, K):
    a = bd.building_series(P, p, K, bound="rank")
    b = bd.building_series(P, p, K, bound="trivial")
    assert a.coeffs == b.coeffs
    assert b.vertices >= a.vertices


@pytest.mark.parametrize("P,p,K", [
    (lr.block_odd(1), 2, 4),
    (lr.block_odd(1), 3, 4),
    (lr.block_even([0]), 3, 5),
    (lr.block_even([0]), 2, 5),
    (lr.block_even([0, 1]), 3, 3),
])
def test_walk_matches_oracle(P, p, K):
    A = bd.building_series(P, p, K, bound="trivial")
    assert bd.assemble_zeta(A, P.d, P.dprime) == lr.oracle_count(P, p, K)


def test_abelian_factors_example():
    z = bd.assemble_zeta(GeoRatFun.one(), 1, 1)
    assert geo_equal(z, GeoRatFun.geometric(0, 1) * GeoRatFun.geometric(1, 2))


def test_assemble_series_matches_rational():
    P, p, K = lr.block_odd(2), 3, 7
    A = bd.building_series(P, p, K)
    want = series_at_prime(bd.assemble_zeta(cones.prop_odd(2), P.d, P.dprime), p, K)
    assert bd.assemble_zeta(A, P.d, P.dprime) == want


def test_walk_conic_matches_curve_formula():
    P = lr.from_R(lr.CONIC_R)
    for p in (3, 5):
        A1, A2 = cones.curve_parts(2)
        z = bd.assemble_zeta(A1 + A2 * (p + 1), P.d, P.dprime)
        got = bd.assemble_zeta(bd.building_series(P, p, 6), P.d, P.dprime)
        assert got == series_at_prime(z, p, 6)


def test_not_full_strict():
    # zero bracket: every abelian part is admissible, divisors are all p^{r1+1}
    P = lr.abelian(5, 2)
    L = LatticeHNF.from_generators([[3, 0], [0, 1]])
    with pytest.raises(bd.NotFull):
        bd.weight_wprime(P, L, 3, strict=True)


def test_warns_when_not_injective(caplog):
    P = lr.from_matrix([[[0], [3]], [[-3], [0]]], 1)
    with caplog.at_level("WARNING"):
        bd.building_series(P, 3, 1)
    assert "not injective" in caplog.text


def test_assemble_rejects_other_types():
    with pytest.raises(TypeError):
        bd.assemble_zeta([1, 2], 2, 2)
