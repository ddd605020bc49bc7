import pytest
from hypothesis import given, strategies as st

from nilzeta import modcurves as mc
from nilzeta.liering import CONIC_R, dusautoy_R

T = [1, 0]          # t
T2P1 = [1, 0, 1]    # t^2 + 1
PRIMES = [3, 5, 7, 11, 13]


def test_roots_examples():
    for p in PRIMES:
        assert mc.roots_P1(T, p) == {(0, 1)}
    assert mc.roots_P1(T2P1, 5) == {(2, 1), (3, 1)}
    assert mc.roots_P1(T2P1, 3) == set()


def test_n_fp_examples():
    assert mc.n_fp(T, 7) == 1
    assert mc.n_fp(T2P1, 5) == 2
    assert mc.n_fp(T2P1, 3) == 0
    with pytest.raises(mc.RamifiedPrime):
        mc.n_fp(T2P1, 2)


def test_root_at_infinity():
    # degree drops mod 3: 3t^2 + t has the point at infinity as a root
    assert mc.INFINITY in mc.roots_P1([3, 1, 0], 3)


def test_c_pI_partitions_the_line():
    counts = mc.c_pI([T, [1, -1]], 7)
    assert counts == {frozenset({0}): 1, frozenset({1}): 1, frozenset(): 6}


def test_c_pI_collision_and_ramification():
    with pytest.raises(mc.BadPrime):
        mc.c_pI([T, [1, -2]], 2)
    with pytest.raises(mc.RamifiedPrime):
        mc.c_pI([[1, 0, 0]], 5)


@given(st.sampled_from(PRIMES), st.integers(-20, 20), st.integers(-20, 20))
def test_quadratic_root_count(p, b, c):
    coeffs = [1, b, c]
    disc = b * b - 4 * c
    if disc % p == 0:
        return
    legendre = pow(disc % p, (p - 1) // 2, p)
    assert mc.n_fp(coeffs, p) == (2 if legendre == 1 else 0)


def test_conic_points():
    cs = mc.CurveSpec.from_entries(CONIC_R)
    assert [mc.count_points_P2(cs, p) for p in (3, 5, 7, 11, 13)] == [4, 6, 8, 12, 14]


def test_dusautoy_points_frozen():
    cs = mc.CurveSpec.from_entries(dusautoy_R(1))
    assert [mc.count_points_P2(cs, p) for p in (5, 7, 11)] == [8, 8, 12]


def test_count_matches_naive_enumeration():
    cs = mc.CurveSpec.from_entries(dusautoy_R(1))
    for p in (3, 5):
        naive = sum(1 for pt in mc.projective_points_P2(p)
                    if int(cs.det_expr.subs(dict(zip(mc._YS, pt)))) % p == 0)
        assert naive == mc.count_points_P2(cs, p)


def test_determinants():
    y1, y2, y3 = mc._YS
    assert mc.CurveSpec.from_entries(CONIC_R).det_expr == y1 * y3 - y2 ** 2
    assert mc.CurveSpec.from_entries(dusautoy_R(1)).det_expr.expand() == (
        y1 * y3 ** 2 - y1 ** 3 - y2 ** 2 * y3).expand()


def test_whole_plane():
    cs = mc.CurveSpec(((( 1, 0, 0), (1, 0, 0)), ((1, 0, 0), (1, 0, 0))))
    assert mc.count_points_P2(cs, 5) == 31


def test_smoothness():
    conic = mc.CurveSpec.from_entries(CONIC_R)
    assert mc.is_smooth_mod_p(conic, 5)
    # partials vanish only at (0:1:0), which is off the curve
    assert mc.is_smooth_mod_p(conic, 2)
    # det = y1^2 y3: a double line
    dbl = mc.CurveSpec((((1, 0, 0), (0, 0, 0), (0, 0, 0)),
                        ((0, 0, 0), (1, 0, 0), (0, 0, 0)),
                        ((0, 0, 0), (0, 0, 0), (0, 0, 1))))
    for p in (3, 5, 7):
        assert not mc.is_smooth_mod_p(dbl, p)
        assert not mc.is_smooth_mod_p(dbl, p, method="scan")
    E = mc.CurveSpec.from_entries(dusautoy_R(1))
    for p in (5, 7):
        assert mc.is_smooth_mod_p(E, p)
        assert mc.is_smooth_mod_p(E, p, method="scan")


def test_singular_scan_du_sautoy():
    assert mc.singular_prime_scan(mc.CurveSpec.from_entries(dusautoy_R(1)), 30) == [2]


def test_curve_spec_validation():
    with pytest.raises(ValueError):
        mc.CurveSpec((((1, 0, 0),),))
