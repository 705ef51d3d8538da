"""Numerical dynamics: Julia-set sampling, escape-time rasters and potentials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (InvalidWindow, MissingEscapeRadius, NotInBasin, NotSuperattracting, PreimageFailure,
                     SampleCollision)
from .isometry import apply_pairs, to_zero
from .rational import HomogeneousLift, RationalMap, conjugate
from .roots import aberth_batch
from .sphere import (SpherePoint, chordal_distance_pairs, normalize_pairs, pairs_from_complex,
                     pairs_to_complex, pairs_to_r3, points_from_pairs, r3_to_pairs)

DEFAULT_BURN_IN = 50
DEFAULT_SAMPLES = 100_000
DEFAULT_CHAINS = 1000
MAX_CONSECUTIVE_FAILURES = 10
MAX_PERIOD = 8


@dataclass
class PointCloud:
    """Sample of sphere points stored as normalized homogeneous pairs.

    ``chain`` records which backward orbit produced each point, so Monte
    Carlo errors can be estimated from per-chain means.
    """

    pairs: np.ndarray
    provenance: dict = field(default_factory=dict)
    chain: Optional[np.ndarray] = None

    def __post_init__(self):
        self.pairs = normalize_pairs(np.asarray(self.pairs, dtype=complex).reshape(-1, 2))
        if len(self.pairs) == 0:
            raise ValueError("point cloud must be nonempty")
        self._r3 = None

    def __len__(self):
        return len(self.pairs)

    @property
    def points(self) -> list[SpherePoint]:
        return points_from_pairs(self.pairs)

    def affine(self) -> np.ndarray:
        return pairs_to_complex(self.pairs)

    def r3(self) -> np.ndarray:
        if self._r3 is None:
            self._r3 = pairs_to_r3(self.pairs)
        return self._r3

    def mapped(self, f) -> "PointCloud":
        """Image under a function on pair arrays (an isometry or a map's ``eval_pairs``)."""
        return PointCloud(f(self.pairs), dict(self.provenance), self.chain)

    def save(self, path) -> None:
        """One ``re im`` line per point, ``inf`` for infinity."""
        z = self.affine()
        with open(path, "w") as fh:
            for w in z:
                fh.write("inf\n" if not np.isfinite(w) else f"{float(w.real)!r} {float(w.imag)!r}\n")

    @classmethod
    def load(cls, path) -> "PointCloud":
        vals = []
        with open(path) as fh:
            for line in fh:
                s = line.split()
                if not s:
                    continue
                vals.append(complex(np.inf) if s[0] == "inf" else complex(float(s[0]), float(s[1])))
        return cls(pairs_from_complex(np.array(vals)), {"source": str(path)})


def _solve_preimages(L: HomogeneousLift, cur: np.ndarray):
    """Preimage candidates for each row of ``cur``; returns (pairs (B, d, 2), ok (B,))."""
    d = L.degree
    c = cur[:, 1:2] * L.p[None, :] - cur[:, 0:1] * L.q[None, :]
    # solve in the chart where the polynomial's leading coefficient dominates
    flip = np.abs(c[:, -1]) < np.abs(c[:, 0])
    cc = np.where(flip[:, None], c[:, ::-1], c)
    roots = np.empty((len(cur), d), dtype=complex)
    ok = np.zeros(len(cur), dtype=bool)
    good = cc[:, -1] != 0
    if good.any():
        r, k = aberth_batch(cc[good])
        roots[good], ok[good] = r, k
    out = np.empty((len(cur), d, 2), dtype=complex)
    small = np.abs(roots) <= 1
    a = np.where(small, roots, 1.0)
    b = np.where(small, 1.0, 1.0 / np.where(small, 1.0, roots))
    out[..., 0] = np.where(flip[:, None], b, a)
    out[..., 1] = np.where(flip[:, None], a, b)
    return normalize_pairs(out), ok


def sample_julia(R: RationalMap, count: int = DEFAULT_SAMPLES, burn_in: int = DEFAULT_BURN_IN,
                 seed: int = 0, chains: Optional[int] = None) -> PointCloud:
    """Random backward orbits approximating J(R) and its maximal-entropy measure.

    ``chains`` independent orbits run side by side from random starting
    points; at every step each picks one of the ``d`` preimages (counted with
    multiplicity) uniformly.  The first ``burn_in`` steps are discarded.
    """
    if R.degree < 2:
        raise ValueError("sampling needs degree >= 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    n_chains = min(count, chains or DEFAULT_CHAINS)
    per_chain = -(-count // n_chains)
    L = R.lift()
    d = L.degree

    cur = r3_to_pairs(rng.normal(size=(n_chains, 3)))
    fails = np.zeros(n_chains, dtype=int)
    out = np.empty((per_chain, n_chains, 2), dtype=complex)
    total = burn_in + per_chain
    choices = rng.integers(0, d, size=(total, n_chains))
    for step in range(total):
        pre, ok = _solve_preimages(L, cur)
        pick = pre[np.arange(n_chains), choices[step]]
        cur = np.where(ok[:, None], pick, cur)
        fails = np.where(ok, 0, fails + 1)
        if np.any(fails > MAX_CONSECUTIVE_FAILURES):
            raise PreimageFailure("root finder failed on more than 10 consecutive steps")
        if step >= burn_in:
            out[step - burn_in] = cur
    pairs = out.reshape(-1, 2)[:count]
    chain = np.tile(np.arange(n_chains), per_chain)[:count]
    prov = {"kind": "InverseIteration", "seed": seed, "burn_in": burn_in, "count": count,
            "chains": n_chains}
    return PointCloud(pairs, prov, chain)


# ---------------------------------------------------------------------------
# escape-time rasters
# ---------------------------------------------------------------------------

@dataclass
class Raster:
    """Per-pixel forward-iteration record; row 0 is the top of the window."""

    width: int
    height: int
    window: tuple[float, float, float]
    max_iter: int
    escaped: np.ndarray
    iterations: np.ndarray
    final_modulus: np.ndarray
    converged: np.ndarray
    final: np.ndarray
    params: dict = field(default_factory=dict)
    distance: Optional[np.ndarray] = None
    period: Optional[np.ndarray] = None
    cycle_mean: Optional[np.ndarray] = None

    @property
    def pixel_size(self) -> float:
        return self.window[2] / self.width


def pixel_grid(window, resolution) -> np.ndarray:
    """Pixel-centre affine values for ``window = (cx, cy, w)`` and ``resolution = (W, H)``."""
    try:
        cx, cy, w = (float(t) for t in window)
        W, H = (int(t) for t in resolution)
    except (TypeError, ValueError):
        raise InvalidWindow(f"bad window {window!r} / resolution {resolution!r}") from None
    if not (math.isfinite(cx) and math.isfinite(cy) and math.isfinite(w)) or w <= 0:
        raise InvalidWindow(f"window width must be positive and finite, got {window!r}")
    if W < 1 or H < 1:
        raise InvalidWindow(f"resolution must be at least 1x1, got {resolution!r}")
    step = w / W
    xs = cx + (np.arange(W) + 0.5 - W / 2) * step
    ys = cy - (np.arange(H) + 0.5 - H / 2) * step
    return xs[None, :] + 1j * ys[:, None]


def general_escape_radius(R: RationalMap) -> float:
    """``r`` with ``|z| >= r  =>  |R(z)| >= 2|z|`` when deg P >= deg Q + 2.

    With ``A = sum_{j<n} |p_j|`` and ``B = sum |q_j|``, for ``|z| >= 1``:
    ``|R(z)| >= |z|^(n-k) (|p_n| - A/|z|) / B``; take ``|z| >= 2A/|p_n|`` and
    ``|z|^(n-k-1) >= 4B/|p_n|``.
    """
    p, q = R.num.coeffs[:R.num.degree + 1], R.den.coeffs[:R.den.degree + 1]
    n, k = len(p) - 1, len(q) - 1
    if n < k + 2:
        raise MissingEscapeRadius("infinity is not a superattracting fixed point; "
                                  "pass an explicit escape radius (or inf)")
    lead = abs(p[-1])
    A = float(np.sum(np.abs(p[:-1])))
    B = float(np.sum(np.abs(q)))
    return max(2.0, 2 * A / lead, (4 * B / lead) ** (1 / (n - k - 1)))


def escape_time_raster(R: RationalMap, window=(0.0, 0.0, 4.0), resolution=(400, 400),
                       max_iter: int = 256, escape_radius: float = 2.0,
                       converge_tol: float = 1e-10, max_period: int = MAX_PERIOD) -> Raster:
    """Forward-iterate every pixel until ``|z| > escape_radius`` or ``max_iter``.

    Orbits that close up (``|z_n - z_{n-p}| < converge_tol`` for some
    ``p <= max_period``) stop early and are flagged ``converged`` with their
    period and the mean of the cycle.  ``escape_radius=inf`` disables escape.
    Escaped pixels also get the distance estimate
    ``|z_n| log|z_n| / |(R^n)'(z)|`` to the Julia set.
    """
    z = pixel_grid(window, resolution).ravel()
    H, W = int(resolution[1]), int(resolution[0])
    n = z.size
    escaped = np.zeros(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    iters = np.zeros(n, dtype=np.int64)
    period = np.zeros(n, dtype=np.int64)
    cmean = np.full(n, np.nan + 0j)
    der = np.ones(n, dtype=complex)
    hist = np.full((max_period, n), np.nan + 0j)
    hist[0] = z
    active = np.arange(n)
    P, Q = R.num, R.den
    dP, dQ = P.deriv(), Q.deriv()
    for it in range(1, max_iter + 1):
        if active.size == 0:
            break
        za = z[active]
        with np.errstate(all="ignore"):
            pz, qz = P(za), Q(za)
            zn = pz / qz
            der[active] *= (dP(za) * qz - pz * dQ(za)) / (qz * qz)
        bad = ~np.isfinite(zn)
        zn[bad] = complex(np.inf, 0)
        esc = bad | (np.abs(zn) > escape_radius)
        conv = np.zeros(active.size, dtype=bool)
        for p in range(1, min(max_period, it) + 1):
            with np.errstate(invalid="ignore"):
                hit = ~esc & ~conv & (np.abs(zn - hist[(it - p) % max_period, active]) < converge_tol)
            if hit.any():
                cyc = zn[hit] + sum(hist[(it - q) % max_period, active[hit]] for q in range(1, p))
                cmean[active[hit]] = cyc / p
                period[active[hit]] = p
                conv |= hit
        z[active] = zn
        hist[it % max_period, active] = zn
        iters[active] = it
        escaped[active[esc]] = True
        converged[active[conv]] = True
        active = active[~(esc | conv)]
    fm = np.abs(z)
    dist = np.full(n, np.nan)
    with np.errstate(all="ignore"):
        de = fm * np.log(fm) / np.abs(der)
    de = np.where(np.isfinite(fm), de, np.inf)
    de = np.where(np.isnan(de), 0.0, de)
    dist[escaped] = de[escaped]
    return Raster(W, H, tuple(float(t) for t in window), max_iter,
                  escaped.reshape(H, W), iters.reshape(H, W), fm.reshape(H, W),
                  converged.reshape(H, W), z.reshape(H, W),
                  {"escape_radius": float(escape_radius)}, dist.reshape(H, W),
                  period.reshape(H, W), cmean.reshape(H, W))


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    def __iter__(self):
        return iter((self.value, self.stderr))


def _chain_stderr(x: np.ndarray, chain: Optional[np.ndarray]) -> float:
    """Standard error of the mean, by batch means over chains when available."""
    if chain is not None:
        ids, inv = np.unique(chain, return_inverse=True)
        if len(ids) >= 10:
            sums = np.bincount(inv, weights=x)
            cnt = np.bincount(inv)
            means = sums / cnt
            # weight by chain length so batch means reproduce the overall mean
            w = cnt / cnt.sum()
            mu = np.sum(w * means)
            var = np.sum(w ** 2 * (means - mu) ** 2) * len(ids) / (len(ids) - 1)
            return float(math.sqrt(var))
    return float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.inf


def log_kernel(z: np.ndarray, samples: PointCloud) -> np.ndarray:
    """``log 1/rho(z_i, w_j)`` for pairs ``z`` (m, 2); SampleCollision near the log pole."""
    rho = chordal_distance_pairs(z[:, None, :], samples.pairs[None, :, :])
    if np.any(rho < 1e-14):
        raise SampleCollision("evaluation point coincides with a measure sample")
    return -np.log(rho)


def ergodic_potential(R: RationalMap, z, measure_samples: PointCloud) -> Estimate:
    """Monte Carlo ``u_R(z) = integral of log 1/rho(z, w) dmu_R(w)``.

    ``R`` only documents which map the samples belong to.
    """
    p = z.pair()[None, :] if isinstance(z, SpherePoint) else normalize_pairs(np.asarray(z).reshape(1, 2))
    vals = log_kernel(p, measure_samples)[0]
    return Estimate(float(vals.mean()), _chain_stderr(vals, measure_samples.chain))


def potential_difference(z: SpherePoint, w: SpherePoint, samples: PointCloud) -> Estimate:
    """``u(z) - u(w)`` from one sample set, with the paired standard error."""
    vals = log_kernel(np.array([z.pair(), w.pair()]), samples)
    diff = vals[0] - vals[1]
    return Estimate(float(diff.mean()), _chain_stderr(diff, samples.chain))


def escape_rate(lift: HomogeneousLift, p, n: int = 40) -> np.ndarray | float:
    """``d^-n log ||R^n(p)||`` with per-step renormalization.

    ``p`` is a lift point ``(z1, z2)`` (any norm) or an array of them.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x = np.asarray(p, dtype=complex)
    scalar = x.ndim == 1
    x = x.reshape(-1, 2)
    norm = np.linalg.norm(x, axis=1)
    g = np.log(norm)
    x = x / norm[:, None]
    d = lift.degree
    w = 1.0
    for _ in range(n):
        x = lift(x)
        s = np.linalg.norm(x, axis=1)
        w /= d
        g = g + w * np.log(s)
        x = x / s[:, None]
    return float(g[0]) if scalar else g


def local_degree(R: RationalMap, z0: SpherePoint, tol: float = 1e-8) -> tuple[int, complex]:
    """Local degree ``m`` and leading coefficient ``c`` of ``R`` at a fixed point.

    In a chart moving ``z0`` to 0 the map reads ``c zeta^m + ...``.  Raises
    NotSuperattracting unless ``z0`` is fixed with ``m >= 2``.
    """
    g = to_zero(z0)
    Rl = conjugate(R, g)
    p, q = Rl.num.coeffs, Rl.den.coeffs
    scale = max(np.max(np.abs(p)), np.max(np.abs(q)))
    if abs(q[0]) <= tol * scale or abs(p[0]) > tol * scale:
        raise NotSuperattracting(f"{z0} is not a fixed point")
    big = np.flatnonzero(np.abs(p) > tol * scale)
    m = int(big[0]) if big.size else 0
    if m < 2:
        raise NotSuperattracting(f"{z0} is fixed but not superattracting (local degree {m})")
    return m, complex(p[m] / q[0])


def boettcher_potential(R: RationalMap, z0: SpherePoint, z, n: int = 100,
                        near: float = 1e-3, stop: float = 1e-14):
    """``f(z) = -lim m^-k log|zeta(R^k z)|`` on the basin of a superattracting fixed point.

    ``zeta`` is the chart sending ``z0`` to 0.  Iteration proceeds until
    ``|zeta| < stop`` and the Bottcher normalization ``log|c|/(m-1)`` is added
    so the truncation error is ``O(m^-k |zeta|)`` instead of ``O(m^-k)``.
    Orbits must come within ``near`` of ``z0`` inside ``n`` steps.
    """
    m, c = local_degree(R, z0)
    g = to_zero(z0)
    Rl = conjugate(R, g)
    pts = z.pair()[None, :] if isinstance(z, SpherePoint) else np.asarray(z, dtype=complex)
    scalar = isinstance(z, SpherePoint) or pts.ndim == 1
    pts = normalize_pairs(pts.reshape(-1, 2))
    w = apply_pairs(g, pts)
    x = pairs_to_complex(w)
    corr = math.log(abs(c)) / (m - 1)
    out = np.empty(len(x))
    for i, zeta in enumerate(x):
        k = 0
        entered = abs(zeta) < near
        while abs(zeta) >= stop and zeta != 0:
            if k >= n + 64 or (k >= n and not entered):
                break
            zeta = complex(Rl(zeta))
            k += 1
            if abs(zeta) < near:
                entered = True
        if not entered:
            raise NotInBasin(f"orbit did not approach the fixed point within {n} steps")
        if zeta == 0:
            out[i] = math.inf
        else:
            out[i] = (-math.log(abs(zeta)) - corr) / m ** k
    return float(out[0]) if scalar else out
