import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import juliasym.dynamics as dyn
from juliasym.dynamics import (PointCloud, boettcher_potential, ergodic_potential, escape_rate,
                               escape_time_raster, general_escape_radius, local_degree,
                               pixel_grid, potential_difference, sample_julia)
from juliasym.errors import (InvalidWindow, MissingEscapeRadius, NotInBasin, NotSuperattracting,
                             PreimageFailure, SampleCollision)
from juliasym.isometry import rotation
from juliasym.parser import parse_map
from juliasym.rational import newton_map, rational_map
from juliasym.sphere import SpherePoint, pairs_from_complex, r3_to_pairs
from juliasym.symmetry import hausdorff_distance, sampling_resolution, verify_symmetry_numeric

from conftest import mcmullen

Z2 = rational_map([0, 0, 1])
INF = SpherePoint.infinity()
seeds = st.integers(0, 2 ** 31)


def sphere_points(rng, n):
    v = rng.normal(size=(n, 3))
    return r3_to_pairs(v / np.linalg.norm(v, axis=1)[:, None])


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", [0, 7, 12345])
def test_sample_circle(seed):
    c = sample_julia(Z2, 20_000, seed=seed)
    z = c.affine()
    assert np.max(np.abs(np.abs(z) - 1)) <= 1e-6


def test_sample_chebyshev_segment():
    c = sample_julia(rational_map([-2, 0, 1]), 20_000, seed=3)
    z = c.affine()
    assert np.max(np.abs(z.imag)) <= 1e-6
    assert np.max(np.abs(z.real)) <= 2 + 1e-6


def test_sample_mcmullen_rotation_invariant(cloud_cache):
    c = cloud_cache("mcmullen(2,2,1)")
    ok, d = verify_symmetry_numeric(c, rotation(1j), 0.02)
    assert ok, d


def test_sample_deterministic():
    R = mcmullen(2, 1, 0.3)
    a = sample_julia(R, 5000, seed=11)
    b = sample_julia(R, 5000, seed=11)
    assert np.array_equal(a.pairs, b.pairs)
    assert not np.array_equal(a.pairs, sample_julia(R, 5000, seed=12).pairs)
    assert len(a) == 5000 and a.chain is not None


def test_sample_validation():
    with pytest.raises(ValueError):
        sample_julia(rational_map([0, 1]), 10)
    with pytest.raises(ValueError):
        sample_julia(Z2, 0)


def test_preimage_failure(monkeypatch):
    def broken(c, max_iter=200):
        return np.zeros((len(c), c.shape[1] - 1), dtype=complex), np.zeros(len(c), dtype=bool)

    monkeypatch.setattr(dyn, "aberth_batch", broken)
    with pytest.raises(PreimageFailure):
        sample_julia(Z2, 100)


@pytest.mark.parametrize("spec", ["mcmullen(2,2,1)", "z^2-0.12+0.75i", "mcmullen(2,1,0.5)"])
def test_forward_invariance(spec, cloud_cache):
    a = cloud_cache(spec, 50_000, 1)
    R = parse_map(spec)
    resolution = sampling_resolution(R, 50_000, seeds=(1, 2, 3))
    image = a.mapped(R.eval_pairs)
    assert hausdorff_distance(image, a) <= 2 * resolution


def test_cloud_save_load(tmp_path):
    c = PointCloud(pairs_from_complex(np.array([0.5 + 0.25j, np.inf, -1e-300])))
    c.save(tmp_path / "c.txt")
    text = (tmp_path / "c.txt").read_text().splitlines()
    assert text[1] == "inf"
    back = PointCloud.load(tmp_path / "c.txt")
    assert hausdorff_distance(back, c) <= 1e-15


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------

def test_raster_z2_disk():
    r = escape_time_raster(Z2, (0, 0, 4), (200, 200), 256, 2.0)
    z = pixel_grid((0, 0, 4), (200, 200))
    px = 4 / 200
    outside = np.abs(z) > 1 + px
    inside = np.abs(z) < 1 - px
    assert np.all(r.escaped[outside])
    assert not np.any(r.escaped[inside])


def test_raster_zero_iterations():
    r = escape_time_raster(Z2, (0, 0, 4), (10, 7), 0, 2.0)
    assert r.escaped.shape == (7, 10)
    assert not r.escaped.any() and not r.iterations.any()


@pytest.mark.parametrize("window,res", [((0, 0, 0), (10, 10)), ((0, 0, -1), (10, 10)),
                                        ((0, 0, 4), (0, 10)), ((0, 0, math.nan), (3, 3)),
                                        ("abc", (3, 3))])
def test_invalid_window(window, res):
    with pytest.raises(InvalidWindow):
        escape_time_raster(Z2, window, res)


def test_pixel_grid_orientation():
    g = pixel_grid((1, 2, 4), (4, 2))
    assert g[0, 0].imag > g[1, 0].imag
    assert g[0, 0].real < g[0, 1].real
    assert np.mean(g) == pytest.approx(1 + 2j)


def test_raster_detects_cycles():
    r = escape_time_raster(rational_map([-1, 0, 1]), (0, 0, 4), (60, 60), 256, 2.0)
    assert set(np.unique(r.period[r.converged])) == {2}
    assert np.allclose(r.cycle_mean[r.converged], -0.5, atol=1e-6)


def test_distance_estimate_z2():
    r = escape_time_raster(Z2, (0, 0, 4), (100, 100), 256, 1e6)
    z = pixel_grid((0, 0, 4), (100, 100))
    m = r.escaped
    true = np.abs(z[m]) - 1
    est = r.distance[m]
    # Koebe-type bounds: the estimate is within a factor 4 of the true distance
    assert np.all(est <= 4 * true + 1e-9) and np.all(est >= true / 4)


def test_general_escape_radius():
    rng = np.random.default_rng(0)
    for spec in ["z^2", "z^3 - 2z + 5", "(z^4+3)/(z+0.1)", "mcmullen(2,2,10)"]:
        R = parse_map(spec)
        r = general_escape_radius(R)
        z = r * np.exp(2j * np.pi * rng.random(1000)) * (1 + rng.random(1000))
        assert np.all(np.abs(R(z)) >= 2 * np.abs(z))
    with pytest.raises(MissingEscapeRadius):
        general_escape_radius(newton_map([1, 0, 0, 1]))
    with pytest.raises(MissingEscapeRadius):
        general_escape_radius(parse_map("(z^2+1)/(z-3)"))


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def test_potential_circle_at_zero(cloud_cache):
    c = cloud_cache("z^2")
    u, err = ergodic_potential(Z2, SpherePoint.from_complex(0), c)
    assert u == pytest.approx(-0.5 * math.log(2), abs=1e-9)


def test_potential_rotation_and_antipode(cloud_cache):
    c = cloud_cache("z^2")
    rng = np.random.default_rng(2)
    for _ in range(10):
        z = complex(*rng.normal(size=2))
        w = z * np.exp(2j * np.pi * rng.random())
        d = potential_difference(SpherePoint.from_complex(w), SpherePoint.from_complex(z), c)
        assert abs(d.value) <= 3 * d.stderr + 1e-12
    d = potential_difference(SpherePoint.from_complex(0), INF, c)
    assert abs(d.value) <= 3 * d.stderr + 1e-12


def test_sample_collision():
    c = PointCloud(pairs_from_complex(np.array([1.0, 1j])))
    with pytest.raises(SampleCollision):
        ergodic_potential(Z2, SpherePoint.from_complex(1.0), c)


def test_escape_rate_examples():
    L = Z2.lift()
    assert escape_rate(L, np.array([1, 0])) == 0.0
    R = mcmullen(2, 2, 1)
    L = R.lift()
    rng = np.random.default_rng(5)
    p = rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))
    assert np.max(np.abs(escape_rate(L, L(p)) - 4 * escape_rate(L, p))) <= 1e-6
    u = p / np.linalg.norm(p, axis=1)[:, None]
    assert np.max(np.abs(escape_rate(L, 2 * u) - escape_rate(L, u) - math.log(2))) <= 1e-9


@given(seeds, st.integers(3, 12))
@settings(max_examples=25)
def test_escape_rate_geometric_convergence(seed, n):
    rng = np.random.default_rng(seed)
    R = mcmullen(2, 1, complex(*rng.normal(size=2)))
    L = R.lift()
    p = rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2))
    d = L.degree
    assert np.all(np.abs(escape_rate(L, p, n) - escape_rate(L, p, 2 * n)) <= 10 * d ** (-n))


@pytest.mark.parametrize("spec", ["z^2", "mcmullen(2,2,1)"])
def test_potential_consistency(spec, cloud_cache):
    # u(pi p) - (log|p| - G(p)) is constant; test with non-normalized lift points
    R = parse_map(spec)
    c = cloud_cache(spec)
    rng = np.random.default_rng(9)
    p = sphere_points(rng, 50) * rng.uniform(0.2, 5, size=(50, 1))
    u = np.array([ergodic_potential(R, SpherePoint(*x), c).value for x in p])
    vals = u - (np.log(np.linalg.norm(p, axis=1)) - escape_rate(R.lift(), p))
    assert np.std(vals) <= 0.05


def test_local_degree():
    assert local_degree(Z2, INF)[0] == 2
    assert local_degree(Z2, SpherePoint.from_complex(0))[0] == 2
    assert local_degree(mcmullen(3, 2, 0.5), INF)[0] == 3
    with pytest.raises(NotSuperattracting):
        local_degree(Z2, SpherePoint.from_complex(1))
    with pytest.raises(NotSuperattracting):
        local_degree(Z2, SpherePoint.from_complex(0.5))


def test_boettcher_examples():
    assert boettcher_potential(Z2, INF, SpherePoint.from_complex(2)) == pytest.approx(math.log(2), abs=1e-6)
    R = mcmullen(2, 2, 1)
    rng = np.random.default_rng(1)
    z = 3 + 3 * rng.random(100)
    z = z * np.exp(2j * np.pi * rng.random(100))
    f = boettcher_potential(R, INF, pairs_from_complex(z))
    fR = boettcher_potential(R, INF, pairs_from_complex(R(z)))
    assert np.max(np.abs(fR - 2 * f)) <= 1e-6


def test_boettcher_decreases_toward_julia():
    # z^2: along the ray [1.5, 1] the potential log|z| falls to 0 at J
    t = np.linspace(1.5, 1.0 + 1e-3, 40)
    f = boettcher_potential(Z2, INF, pairs_from_complex(t * np.exp(0.3j)))
    assert np.all(np.diff(f) < 0) and f[-1] < 0.05
    R = mcmullen(2, 2, 1)
    t = np.linspace(3.0, 1.3, 40)
    f = boettcher_potential(R, INF, pairs_from_complex(t * np.exp(0.3j)))
    assert np.all(np.diff(f) < 0)


def test_boettcher_errors():
    with pytest.raises(NotInBasin):
        boettcher_potential(Z2, INF, SpherePoint.from_complex(0.5))
    with pytest.raises(NotSuperattracting):
        boettcher_potential(Z2, SpherePoint.from_complex(1), SpherePoint.from_complex(2))
