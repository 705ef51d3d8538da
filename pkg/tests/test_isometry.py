import cmath
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from juliasym.errors import IdentityHasNoAxis, NotAGroup, ZeroPair
from juliasym.isometry import (IDENTITY, GroupClass, GroupTag, Isometry, apply, apply_pairs,
                               classify_finite_group, compose, cyclic_group, dihedral_group,
                               element_order, fixed_points, group_closure,
                               icosahedral_generators, inverse, inversion, make_isometry,
                               octahedral_generators, rotation, rotation_about,
                               rotation_axis_angle, same_axis, tetrahedral_generators,
                               transport_axis)
from juliasym.sphere import SpherePoint, chordal_distance

f = st.floats(-10, 10, allow_nan=False)
cplx = st.builds(complex, f, f)
isos = st.tuples(cplx, cplx).filter(lambda t: abs(t[0]) + abs(t[1]) > 1e-3).map(lambda t: Isometry(*t))
points = st.tuples(cplx, cplx).filter(lambda t: abs(t[0]) + abs(t[1]) > 1e-3).map(lambda t: SpherePoint(*t))


def P(z):
    return SpherePoint.infinity() if z == "inf" else SpherePoint.from_complex(z)


def mobius_value(sigma, z):
    # affine action, written independently of the homogeneous implementation
    a, b = sigma.a, sigma.b
    return (a * z - b.conjugate()) / (b * z + a.conjugate())


def test_make_isometry_examples():
    assert make_isometry(1, 0).is_identity()
    s = make_isometry(0, 1)
    assert apply(s, P(2)) == P(-0.5)
    assert make_isometry(2, 0) == make_isometry(1, 0)
    with pytest.raises(ZeroPair):
        make_isometry(0, 0)


def test_unit_norm_and_canonical_sign():
    s = Isometry(-3, 4j)
    assert abs(abs(s.a) ** 2 + abs(s.b) ** 2 - 1) <= 1e-12
    assert 0 <= cmath.phase(s.a) < math.pi
    assert Isometry(3, -4j) == s


def test_apply_examples():
    iz = rotation(1j)
    assert apply(iz, P(1)) == P(1j)
    neg_inv = make_isometry(0, 1)
    assert apply(neg_inv, P(0)).is_infinity
    assert apply(neg_inv, P(1j)) == P(1j)


def test_compose_inverse_examples():
    iz = rotation(1j)
    s = rotation(cmath.exp(0.3j))
    assert compose(IDENTITY, s) == s
    assert compose(iz, iz) == rotation(-1)
    neg_inv = make_isometry(0, 1)
    assert inverse(neg_inv) == neg_inv
    for z in (0.3 + 2j, -1.5, 4j):
        assert apply(neg_inv, apply(neg_inv, P(z))) == P(z)


@pytest.mark.parametrize("sigma,expected", [
    (rotation(1j), {0, "inf"}), (inversion(1), {1, -1}), (make_isometry(0, 1), {1j, -1j})])
def test_fixed_points_examples(sigma, expected):
    got = fixed_points(sigma)
    for e in expected:
        assert any(g == P(e) for g in got)


def test_fixed_points_identity():
    with pytest.raises(IdentityHasNoAxis):
        fixed_points(IDENTITY)
    with pytest.raises(IdentityHasNoAxis):
        rotation_axis_angle(IDENTITY)


def test_rotation_axis_angle_examples():
    ax, ang = rotation_axis_angle(rotation(1j))
    assert ang == pytest.approx(math.pi / 2) and ax in (P(0), P("inf"))
    assert rotation_axis_angle(rotation(-1))[1] == pytest.approx(math.pi)
    ax, ang = rotation_axis_angle(inversion(1))
    assert ang == pytest.approx(math.pi) and ax == P(1)


def test_rotation_about_matches_axis_angle():
    axis = SpherePoint(0.3 + 0.2j, 0.9)
    ax, ang = rotation_axis_angle(rotation_about(axis, 1.1))
    assert ang == pytest.approx(1.1)
    assert ax == axis


def test_inversion_is_mu_over_z():
    for mu in (1, 1j, cmath.exp(0.7j)):
        s = inversion(mu)
        for z in (0.5 + 0.1j, -2 + 1j):
            assert apply(s, P(z)) == P(mu / z)


@given(isos, points, points)
def test_action_preserves_chordal_distance(s, p, q):
    assert chordal_distance(apply(s, p), apply(s, q)) == pytest.approx(chordal_distance(p, q), abs=1e-9)


@given(isos, cplx)
def test_homogeneous_action_matches_affine(s, z):
    den = s.b * z + s.a.conjugate()
    if abs(den) < 1e-6:
        return
    assert apply(s, P(z)) == P(mobius_value(s, z))


@given(isos, isos, isos)
def test_composition_associative(a, b, c):
    left = compose(compose(a, b), c)
    right = compose(a, compose(b, c))
    assert left.is_close(right, 1e-12)


@given(isos)
def test_fixed_points_antipodal_and_fixed(s):
    if rotation_angle_small(s):
        return
    p, q = fixed_points(s)
    assert chordal_distance(p, q) == pytest.approx(2, abs=1e-9)
    assert chordal_distance(apply(s, p), p) <= 1e-9
    assert chordal_distance(apply(s, q), q) <= 1e-9


def rotation_angle_small(s):
    return math.hypot(s.a.imag, abs(s.b)) < 1e-6


def test_apply_pairs_matches_apply():
    s = Isometry(0.3 + 0.1j, 0.5 - 0.7j)
    pts = np.array([[1, 0], [0, 1], [0.6, 0.8j]], dtype=complex)
    out = apply_pairs(s, pts)
    for p, o in zip(pts, out):
        assert apply(s, SpherePoint(*p)) == SpherePoint(*o)


# ---------------------------------------------------------------------------
# group classification against an independent closure oracle
# ---------------------------------------------------------------------------

def oracle_closure(gens):
    """BFS on raw 2x2 matrices, equality up to sign; independent of the package's element sets."""
    mats = [np.eye(2, dtype=complex)]
    gm = [g.matrix for g in gens]
    frontier = list(mats)

    def known(m):
        return any(min(np.abs(m - x).max(), np.abs(m + x).max()) < 1e-8 for x in mats)

    while frontier:
        new = []
        for m in frontier:
            for g in gm:
                x = g @ m
                if not known(x):
                    mats.append(x)
                    new.append(x)
        frontier = new
        assert len(mats) <= 500
    return mats


def oracle_orders(mats):
    out = Counter()
    for m in mats:
        x = np.eye(2, dtype=complex)
        for n in range(1, 61):
            x = x @ m
            if min(np.abs(x - np.eye(2)).max(), np.abs(x + np.eye(2)).max()) < 1e-8:
                out[n] += 1
                break
    return out


POLY = {
    "tetra": (tetrahedral_generators, GroupTag.TETRAHEDRAL, 12, {1: 1, 2: 3, 3: 8}),
    "octa": (octahedral_generators, GroupTag.OCTAHEDRAL, 24, {1: 1, 2: 9, 3: 8, 4: 6}),
    "icosa": (icosahedral_generators, GroupTag.ICOSAHEDRAL, 60, {1: 1, 2: 15, 3: 20, 5: 24}),
}


@pytest.mark.parametrize("name", POLY)
def test_polyhedral_closure_matches_oracle(name):
    gens, tag, n, hist = POLY[name]
    els = group_closure(gens())
    assert len(els) == n == len(oracle_closure(gens()))
    assert Counter(element_order(g) for g in els) == hist
    assert oracle_orders(oracle_closure(gens())) == hist
    assert classify_finite_group(els).tag == tag


@pytest.mark.parametrize("k", range(2, 13))
def test_cyclic_and_dihedral(k):
    c = cyclic_group(k)
    assert len(oracle_closure(c)) == k
    g = classify_finite_group(c)
    assert g.same_type(GroupClass(GroupTag.CYCLIC, k)) and g.order == k
    assert same_axis(g.axis, (P(0), P("inf")))
    d = dihedral_group(k)
    assert len(oracle_closure(d)) == 2 * k
    g = classify_finite_group(d)
    assert g.same_type(GroupClass(GroupTag.DIHEDRAL, k)) and g.order == 2 * k


def test_small_examples():
    assert classify_finite_group([IDENTITY]).tag == GroupTag.TRIVIAL
    four = [rotation(1j ** j) for j in range(4)]
    g = classify_finite_group(four)
    assert str(g) == "Cyclic(4)"
    g = classify_finite_group(four + [inversion(1j ** j) for j in range(4)])
    assert str(g) == "Dihedral(4)" and g.order == 8


def test_not_a_group():
    with pytest.raises(NotAGroup):
        classify_finite_group([IDENTITY, rotation(1j)])
    with pytest.raises(NotAGroup):
        group_closure([rotation(cmath.exp(1j))])


def test_group_class_validation():
    with pytest.raises(ValueError):
        GroupClass(GroupTag.CYCLIC, 1)
    assert GroupClass(GroupTag.CIRCLE).order == math.inf
    assert GroupClass(GroupTag.TETRAHEDRAL).to_dict()["order"] == 12


@given(isos)
def test_classification_conjugation_invariant(gamma):
    for gens in (dihedral_group(3), cyclic_group(5), tetrahedral_generators()):
        base = classify_finite_group(group_closure(gens))
        conj = [compose(gamma, compose(g, inverse(gamma))) for g in group_closure(gens)]
        got = classify_finite_group(conj)
        assert got.same_type(base)
        if base.axis is not None:
            assert same_axis(got.axis, transport_axis(gamma, base.axis), 1e-6)
