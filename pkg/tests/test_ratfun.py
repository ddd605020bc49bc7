from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilzeta.ratfun import (
    BivarPoly, GeoRatFun, NotExpandable, PoleError, check_functional_equation, eval_at,
    format_geo, geo_equal, geo_product, geo_sum, invert_vars, series_at_prime, series_in_T,
)
from nilzeta import cones

G = GeoRatFun.geometric

# exponents small enough that evaluation stays cheap
exps = st.tuples(st.integers(0, 4), st.integers(0, 3))
polys = st.dictionaries(exps, st.integers(-3, 3), min_size=1, max_size=4).map(BivarPoly)
denoms = st.lists(st.tuples(st.integers(0, 4), st.integers(1, 3)), max_size=3)


@st.composite
def ratfuns(draw):
    numer = draw(polys)
    pre = draw(st.tuples(st.integers(-2, 2), st.integers(0, 2)))
    return GeoRatFun.make(numer, draw(denoms), draw(st.integers(-2, 2).filter(bool)), pre)


# evaluation point away from every pole of the strategies above
PT = (Fraction(3), Fraction(1, 7))


def test_additive_identity_and_inverse():
    f = G(1, 1)
    assert geo_equal(f + GeoRatFun.zero(), f)
    assert (f + (-f)).is_zero() or geo_equal(f + (-f), GeoRatFun.zero())


def test_cancellation_and_unit():
    f = G(1, 1)
    assert geo_equal(f * GeoRatFun.poly({(0, 0): 1, (1, 1): -1}), GeoRatFun.one())
    assert geo_equal(f * GeoRatFun.one(), f)


def test_factor_identity():
    assert geo_equal(G(1, 1), GeoRatFun.make({(0, 0): 1, (1, 1): 1}, [(2, 2)]))
    assert not geo_equal(G(1, 1), G(2, 1))


def test_invert_geometric():
    assert geo_equal(invert_vars(G(1, 1)), GeoRatFun.monomial(1, 1, -1) * G(1, 1))
    assert geo_equal(invert_vars(GeoRatFun.one()), GeoRatFun.one())


def test_functional_equation_examples():
    assert check_functional_equation(cones.prop_odd(1)) == (-1, 1, 0)
    A1, A2 = cones.curve_parts(3)
    assert check_functional_equation(A1) == (1, 3, 0)
    assert check_functional_equation(A2) == (1, 4, 0)
    assert check_functional_equation(G(1, 1) + G(2, 1)) is None


def test_series_examples():
    s = series_in_T(G(1, 1), 3)
    assert s.coeffs == [{0: 1}, {1: 1}, {2: 1}, {3: 1}]
    s = series_in_T(G(0, 1) * G(1, 1), 2)
    assert s.coeffs == [{0: 1}, {0: 1, 1: 1}, {0: 1, 1: 1, 2: 1}]


def test_series_divides_constant_factors():
    # (1 - X)/(1 - X^2) = 1/(1 + X): not a polynomial share, so it must fail
    with pytest.raises(NotExpandable):
        series_in_T(cones.inv_share(2), 2)
    # while (p+1) * 1/(p+1) expands
    one = cones.inv_share(2) * cones.p_binomial(2)
    assert series_in_T(one, 1).coeffs == [{0: 1}, {}]


def test_eval_examples():
    assert eval_at(G(1, 1), 2, Fraction(1, 4)) == 2
    with pytest.raises(PoleError):
        eval_at(G(1, 1), 2, Fraction(1, 2))


def test_eval_a_empty():
    p, t, d, n = 3, Fraction(1, 81), 3, 1
    want = Fraction(1, p + 1) + Fraction(p ** d) * t ** (d + 1 - n) / (1 - p ** (d + 1) * t ** (d + 1 - n))
    assert eval_at(cones.a_empty(d, n), p, t) == want


def test_format():
    assert format_geo(cones.prop_odd(2)) == "(1 + X^5*Y^5)/(1 - X^6*Y^5)"
    assert format_geo(GeoRatFun.zero()) == "0"
    assert format_geo(G(1, 1) * G(0, 1)) == "1/((1 - Y)(1 - X*Y))"


def test_mixed_sign_factor_rejected():
    with pytest.raises(ValueError):
        GeoRatFun.make({(0, 0): 1}, [(1, -1)])


@given(ratfuns(), ratfuns())
def test_add_mul_match_evaluation(f, g):
    assert eval_at(f + g, *PT) == eval_at(f, *PT) + eval_at(g, *PT)
    assert eval_at(f * g, *PT) == eval_at(f, *PT) * eval_at(g, *PT)


@given(ratfuns())
def test_invert_is_involution(f):
    assert geo_equal(invert_vars(invert_vars(f)), f)
    assert eval_at(invert_vars(f), *PT) == eval_at(f, 1 / PT[0], 1 / PT[1])


@given(ratfuns(), ratfuns())
def test_geo_equal_is_value_equality(f, g):
    same = eval_at(f, *PT) == eval_at(g, *PT)
    if geo_equal(f, g):
        assert same
    assert geo_equal(f * g, g * f)
    assert geo_equal((f + g) - g, f)


@given(ratfuns(), ratfuns(), st.integers(2, 5))
def test_series_of_product_is_convolution(f, g, x):
    K = 4
    sf, sg = series_in_T(f, K).at(x), series_in_T(g, K).at(x)
    conv = [sum(sf[i] * sg[k - i] for i in range(k + 1)) for k in range(K + 1)]
    assert series_in_T(f * g, K).at(x) == conv


@given(ratfuns())
def test_functional_equation_reported_is_true(f):
    if f.is_zero():
        with pytest.raises(ValueError):
            check_functional_equation(f)
        return
    fe = check_functional_equation(f)
    if fe is not None:
        s, a, b = fe
        assert geo_equal(invert_vars(f), GeoRatFun.monomial(a, b, s) * f)


def test_symmetric_function_detected():
    # (1 + XY)/(1 - X^2 Y^2) is symmetric up to -1
    f = GeoRatFun.make({(0, 0): 1, (1, 1): 1}, [(2, 2)])
    assert check_functional_equation(f) == (-1, 1, 1)


def test_sum_and_product_helpers():
    fs = [G(i, 1) for i in range(3)]
    assert geo_equal(geo_product(fs), fs[0] * fs[1] * fs[2])
    assert geo_equal(geo_sum(fs), fs[0] + fs[1] + fs[2])


def test_series_at_prime_abelian():
    # sublattices of Z^3 of index 4: 1 + 2 + 2*4 + 8 + 16
    z = G(0, 1) * G(1, 1) * G(2, 1)
    assert series_at_prime(z, 2, 2) == [1, 7, 35]
