import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from juliasym.errors import DegenerateInput
from juliasym.isometry import Isometry, inversion, rotation
from juliasym.rational import (RationalMap, compose, conjugate, critical_points, equals,
                               isometry_from_map, lift, map_residual, newton_map,
                               preimage_pairs, rational_map)
from juliasym.sphere import SpherePoint, chordal_distance, pairs_from_complex

from conftest import mcmullen


def P(z):
    return SpherePoint.infinity() if z == "inf" else SpherePoint.from_complex(z)


def z2_plus(lam):
    return rational_map([lam, 0, 0, 0, 1], [0, 0, 1])


def random_map(rng, d):
    p = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    q = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    return RationalMap(p, q)


seeds = st.integers(0, 2 ** 31)


def contains(points, expected, tol=1e-7):
    pts = list(points)
    for e in expected:
        j = next((i for i, p in enumerate(pts) if chordal_distance(p, P(e)) <= tol), None)
        assert j is not None, e
        pts.pop(j)
    return not pts


def test_eval_examples():
    R = z2_plus(1)
    assert R.eval(P(1)) == P(2)
    assert R.eval(P(0)).is_infinity
    assert R.eval(P("inf")).is_infinity


def test_degree_examples():
    assert z2_plus(0.3).degree == 4
    assert rational_map([0.3, 0, 0, 1], [0, 1]).degree == 3
    assert mcmullen(3, 2, 0).degree == 3


def test_coprime_reduction():
    R = RationalMap(np.polynomial.polynomial.polyfromroots([1, 2, 3j]),
                    np.polynomial.polynomial.polyfromroots([2, -1]))
    assert R.degree == 2
    assert equals(R, rational_map(np.polynomial.polynomial.polyfromroots([1, 3j]), [1, 1]))
    assert rational_map([0, 0, 1], [0, 1]).degree == 1


def test_critical_points_examples():
    assert contains(critical_points(rational_map([0, 0, 1])), [0, "inf"])
    lam = 0.5 + 0.2j
    roots4 = [lam ** 0.25 * 1j ** k for k in range(4)]
    assert contains(critical_points(z2_plus(lam)), [0, "inf"] + roots4)
    N = newton_map([1, 0, 0, 1])
    assert contains(critical_points(N), [0] + [-(1j ** 0) * cmath.exp(2j * cmath.pi * k / 3) for k in range(3)])


@given(seeds, st.integers(2, 5))
def test_riemann_hurwitz(seed, d):
    R = random_map(np.random.default_rng(seed), d)
    assert len(critical_points(R)) == 2 * R.degree - 2


def test_compose_examples():
    R = z2_plus(0.7)
    assert equals(compose(R, RationalMap.identity()), R)
    assert equals(compose(rational_map([0, 0, 1]), rational_map([0, 0, 0, 1])), rational_map([0] * 6 + [1]))


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_compose_degree_multiplies_and_evaluates(seed, d1, d2):
    rng = np.random.default_rng(seed)
    R, S = random_map(rng, d1), random_map(rng, d2)
    RS = compose(R, S)
    assert RS.degree == R.degree * S.degree
    z = pairs_from_complex(rng.normal(size=5) + 1j * rng.normal(size=5))
    a = RS.eval_pairs(z)
    b = R.eval_pairs(S.eval_pairs(z))
    assert np.all(np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]) <= 1e-8)


def test_equals_examples():
    R = rational_map([0, 0, 1])
    assert equals(R, R)
    assert equals(R, rational_map([1e-15, 0, 1]))
    assert not equals(R, rational_map([0, 0, 0, 1]))


@given(seeds)
def test_equals_equivalence(seed):
    rng = np.random.default_rng(seed)
    R = random_map(rng, 3)
    S = RationalMap(R.num.coeffs * 2j, R.den.coeffs * 2j)
    T = RationalMap(R.num.coeffs + 1e-12, R.den.coeffs)
    assert equals(R, S) and equals(S, R)
    assert equals(R, T) and equals(S, T) and map_residual(R, T) <= 3e-9


def test_conjugate_examples():
    R = rational_map([0, 0, 1])
    assert equals(conjugate(R, Isometry(1, 0)), R)
    s = inversion(-1)
    C = conjugate(R, s)
    assert C.degree == 2
    for z in (0.3 + 0.1j, 2 - 1j, -0.5j, 1.7, 0.2 + 3j):
        assert C.eval(s(P(z))) == s(R.eval(P(z)))
    # R(-z) = R(z), so conjugating by z -> -z gives -R (R o s = R, not s o R)
    M = z2_plus(0.4)
    C = conjugate(M, rotation(-1))
    z = np.array([0.3 + 0.2j, -1.1 + 0.4j, 2j])
    assert np.allclose(C(z), -M(-z))
    assert equals(C, -M)
    assert equals(compose(M, RationalMap.from_isometry(rotation(-1))), M)


def test_lift_examples():
    L = lift(rational_map([0, 0, 1]))
    assert np.allclose(L(np.array([[2, 3]])), [[4, 9]])
    lam = 0.3j
    L = lift(z2_plus(lam))
    x = np.array([[0.7 + 0.1j, -1.2 + 0.5j]])
    z1, z2 = x[0]
    expected = np.array([z1 ** 4 + lam * z2 ** 4, z1 ** 2 * z2 ** 2])
    got = L(x)[0]
    assert abs(got[0] * expected[1] - got[1] * expected[0]) <= 1e-12


@given(seeds)
def test_lift_round_trip(seed):
    rng = np.random.default_rng(seed)
    R = random_map(rng, 3)
    z = rng.normal(size=100) * 3 + 1j * rng.normal(size=100) * 3
    w = R.lift()(pairs_from_complex(z))
    affine = w[:, 0] / w[:, 1]
    direct = R(z)
    assert np.all(np.abs(affine - direct) <= 1e-9 * (1 + np.abs(direct)))
    assert np.max(np.abs(R.lift().p)) <= 1 + 1e-12


def test_newton_examples():
    assert equals(newton_map([-1, 0, 1]), rational_map([1, 0, 1], [0, 2]))
    N = newton_map([1, 0, 0, 1])
    assert equals(N, rational_map([-1, 0, 0, 2], [0, 0, 3]))
    for k in range(3):
        r = cmath.exp(1j * cmath.pi * (2 * k + 1) / 3)
        assert abs(N(r) - r) <= 1e-12
        assert abs(N.derivative(r)) <= 1e-12
    with pytest.raises(DegenerateInput):
        newton_map([1, 2, 1])


@given(seeds)
def test_preimages_map_back(seed):
    rng = np.random.default_rng(seed)
    R = random_map(rng, 3)
    p = SpherePoint(*(rng.normal(size=2) + 1j * rng.normal(size=2)))
    pre = preimage_pairs(R, p)
    assert len(pre) == 3
    for w in R.eval_pairs(pre):
        assert chordal_distance(SpherePoint(*w), p) <= 1e-7


def test_preimages_at_zero_and_infinity():
    R = rational_map([0, 0, 1])
    pre = preimage_pairs(R, P(0))
    assert all(SpherePoint(*w) == P(0) for w in pre)
    pre = preimage_pairs(mcmullen(2, 2, 1), P("inf"))
    assert sum(SpherePoint(*w) == P(0) for w in pre) == 2
    assert sum(SpherePoint(*w).is_infinity for w in pre) == 2


def test_isometry_from_map():
    assert isometry_from_map(rational_map([0, 1j])) == rotation(1j)
    assert isometry_from_map(rational_map([1], [0, 1])) == inversion(1)
    assert isometry_from_map(rational_map([0, 2])) is None
    assert isometry_from_map(rational_map([0, 0, 1])) is None


@given(seeds)
def test_eval_matches_affine(seed):
    rng = np.random.default_rng(seed)
    R = random_map(rng, 4)
    z = (rng.random(20) * 10) * np.exp(2j * np.pi * rng.random(20))
    vals = R(z)
    ok = np.abs(R.den(z)) > 1e-3
    for zz, v in zip(z[ok], vals[ok]):
        assert R.eval(P(zz)) == P(v) or chordal_distance(R.eval(P(zz)), P(v)) <= 1e-10
