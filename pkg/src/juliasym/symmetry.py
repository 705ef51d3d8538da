"""Symmetry criteria for Julia sets as executable checks, and group classification."""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import DoesNotFixPoint, NotAGroup, NotSuperattracting, UnrecognizedOrder
from .dynamics import PointCloud, local_degree, sample_julia
from .isometry import (IDENTITY, GroupClass, GroupTag, Isometry, apply, apply_pairs,
                       classify_finite_group, compose as compose_iso, dedupe, group_closure,
                       inverse, inversion, power, rotation, rotation_about, to_zero)
from .rational import (MAP_TOL, RationalMap, compose, conjugate, critical_points,
                       map_residual, preimage_pairs)
from .sphere import (SpherePoint, antipode, chordal_distance, chordal_distance_pairs,
                     normalize_pairs, pairs_to_r3, r3_to_pairs)

DEFAULT_TOL = 0.02
DEFAULT_MAX_ORDER = 64
DEFAULT_CLASSIFY_SAMPLES = 20_000
MATCH_TOL = 1e-6
CIRCLE_MAX_GAP = 0.1

Points = Union[PointCloud, np.ndarray]


def _r3(x: Points) -> np.ndarray:
    if isinstance(x, PointCloud):
        return x.r3()
    return pairs_to_r3(np.asarray(x).reshape(-1, 2))


# ---------------------------------------------------------------------------
# algebraic criteria
# ---------------------------------------------------------------------------

def check_commutation(R: RationalMap, sigma: Isometry, k: int,
                      tol: float = MAP_TOL) -> tuple[bool, float]:
    """Test ``R o sigma = sigma^k o R`` as an identity of rational maps."""
    if k < 1:
        raise ValueError("k must be >= 1")
    left = compose(R, RationalMap.from_isometry(sigma))
    right = compose(RationalMap.from_isometry(power(sigma, k)), R)
    res = map_residual(left, right)
    return res <= tol, res


def necessary_condition_check(R: RationalMap, sigma: Isometry,
                              z0: SpherePoint) -> tuple[bool, int]:
    """For ``sigma`` fixing a superattracting fixed point of local degree ``m``,
    a symmetry must satisfy ``R sigma = sigma^m R``; False refutes ``sigma``."""
    m, _ = local_degree(R, z0)
    if chordal_distance(apply(sigma, z0), z0) > 1e-9:
        raise DoesNotFixPoint(f"{sigma} does not fix {z0}")
    ok, _ = check_commutation(R, sigma, m)
    return ok, m


def shared_julia_criterion(R: RationalMap, S: RationalMap,
                           candidates: Iterable[Isometry],
                           max_k: int = DEFAULT_MAX_ORDER) -> Optional[Isometry]:
    """First candidate with ``S R = sigma R S`` and ``R sigma = sigma^k R`` for some k.

    A hit certifies J(R) = J(S); None is inconclusive, not a refutation.
    """
    SR = compose(S, R)
    RS = compose(R, S)
    for sigma in candidates:
        rhs = compose(RationalMap.from_isometry(sigma), RS)
        if map_residual(SR, rhs) > MAP_TOL:
            continue
        if any(check_commutation(R, sigma, k)[0] for k in range(1, max_k + 1)):
            return sigma
    return None


def default_candidates(max_order: int = 12) -> list[Isometry]:
    """Rotations and inversions about the {0, inf} axis by roots of unity up to ``max_order``."""
    out = [IDENTITY]
    for n in range(2, max_order + 1):
        for j in range(n):
            w = cmath.exp(2j * math.pi * j / n)
            out.append(rotation(w))
    for n in range(1, max_order + 1):
        for j in range(n):
            out.append(inversion(cmath.exp(2j * math.pi * j / n)))
    return dedupe(out)


# ---------------------------------------------------------------------------
# numeric criteria
# ---------------------------------------------------------------------------

def _tree(x: np.ndarray) -> cKDTree:
    # backward-orbit clouds are strongly clustered; median splits make queries slow there
    return cKDTree(x, balanced_tree=False, compact_nodes=False)


def directed_hausdorff(a: Points, b: Points, tree: Optional[cKDTree] = None) -> float:
    """``max_{x in a} min_{y in b} rho(x, y)``."""
    tb = tree if tree is not None else _tree(_r3(b))
    return float(tb.query(_r3(a))[0].max())


def hausdorff_distance(a: Points, b: Points) -> float:
    """Symmetric Hausdorff distance in the chordal metric (k-d tree nearest neighbours)."""
    ra, rb = _r3(a), _r3(b)
    da = _tree(rb).query(ra)[0].max()
    db = _tree(ra).query(rb)[0].max()
    return float(max(da, db))


def verify_symmetry_numeric(cloud: PointCloud, sigma: Isometry,
                            tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """``d_H(sigma(cloud), cloud) <= tol``."""
    image = PointCloud(apply_pairs(sigma, cloud.pairs))
    d = hausdorff_distance(image, cloud)
    return d <= tol, d


def sampling_resolution(R: RationalMap, count: int, seeds=(101, 202, 303)) -> float:
    """Largest pairwise Hausdorff distance among independently seeded clouds of ``count`` points."""
    clouds = [sample_julia(R, count, seed=s) for s in seeds]
    return max(hausdorff_distance(a, b) for a, b in itertools.combinations(clouds, 2))


# ---------------------------------------------------------------------------
# pre-critical sets
# ---------------------------------------------------------------------------

def unique_pairs(pairs: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    """Drop points within ``tol`` (chordal) of an earlier point."""
    keep = []
    for p in pairs:
        if not keep or np.min(chordal_distance_pairs(np.array(keep), p[None, :])) > tol:
            keep.append(p)
    return np.array(keep).reshape(-1, 2)


def precritical_set(R: RationalMap, depth: int) -> np.ndarray:
    """Critical points and their preimages up to ``depth`` levels, as distinct pairs."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    level = unique_pairs(np.array([p.pair() for p in critical_points(R)]))
    allp = [level]
    for _ in range(depth):
        nxt = [preimage_pairs(R, SpherePoint(a, b)) for a, b in level]
        level = unique_pairs(np.vstack(nxt))
        allp.append(level)
    return unique_pairs(np.vstack(allp))


def greedy_match_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Max distance when each point of ``a`` (in order) takes its nearest unused point of ``b``."""
    if len(a) != len(b):
        return math.inf
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for p in a:
        d = chordal_distance_pairs(b, p[None, :])
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
    return worst


def precritical_match_distance(R: RationalMap, sigma: Isometry, depth: int) -> float:
    C = precritical_set(R, depth)
    return greedy_match_distance(normalize_pairs(apply_pairs(sigma, C)), C)


def precritical_permutation_check(R: RationalMap, sigma: Isometry, depth: int,
                                  tol: float = MATCH_TOL) -> bool:
    """Does ``sigma`` map the depth-truncated pre-critical set onto itself?"""
    return precritical_match_distance(R, sigma, depth) <= tol


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class Evidence:
    kind: str  # "commutation" or "hausdorff"
    value: float
    tolerance: float
    k: Optional[int] = None

    def to_dict(self):
        d = {"kind": self.kind, "value": self.value, "tolerance": self.tolerance}
        if self.k is not None:
            d["k"] = self.k
        return d


@dataclass
class VerifiedSymmetry:
    isometry: Isometry
    evidence: Evidence
    description: str = ""

    @property
    def numeric_only(self) -> bool:
        return self.evidence.kind == "hausdorff"

    def to_dict(self):
        return {"isometry": str(self.isometry), "description": self.description,
                "evidence": self.evidence.to_dict(), "numeric": self.numeric_only}


@dataclass
class SymmetryReport:
    map_description: str
    verified: list[VerifiedSymmetry]
    group: GroupClass
    notes: list[str] = field(default_factory=list)
    inconclusive: bool = False

    @property
    def status(self) -> str:
        return "inconclusive" if self.inconclusive else "ok"

    def to_dict(self) -> dict:
        return {"map": self.map_description, "status": self.status,
                "group": self.group.to_dict(), "group_name": str(self.group),
                "verified": [v.to_dict() for v in self.verified], "notes": list(self.notes)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"map:    {self.map_description}", f"group:  {self.group}"]
        if self.group.axis is not None:
            lines.append(f"axis:   {self.group.axis[0]} / {self.group.axis[1]}")
        lines.append(f"status: {self.status}")
        lines.append(f"verified symmetries ({len(self.verified)}):")
        for v in self.verified:
            e = v.evidence
            tag = f"R s = s^{e.k} R, residual {e.value:.3e}" if e.kind == "commutation" \
                else f"Hausdorff {e.value:.4f} <= {e.tolerance} [numeric]"
            lines.append(f"  {v.description or v.isometry}: {tag}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def fit_circle(cloud: PointCloud) -> tuple[np.ndarray, float, float, float]:
    """Plane fit to the cloud on the unit sphere.

    Returns ``(normal, offset, max_residual, max_gap)``: the circle is the
    sphere's intersection with ``normal . x = offset``; residual is the largest
    chordal distance to that circle and gap the largest empty arc (radians).
    """
    X = cloud.r3()
    c = X.mean(axis=0)
    _, _, vt = np.linalg.svd(X - c, full_matrices=False)
    n = vt[-1]
    h = float(n @ c)
    if h < 0:
        n, h = -n, -h
    h = min(h, 1.0)
    r = math.sqrt(max(0.0, 1 - h * h))
    proj = X - np.outer(X @ n - h, n)
    rad = proj - h * n
    norm = np.linalg.norm(rad, axis=1)
    if r == 0 or np.any(norm == 0):
        return n, h, math.inf, math.inf
    q = h * n + r * rad / norm[:, None]
    resid = float(np.max(np.linalg.norm(X - q, axis=1)))
    e1 = rad[0] / norm[0]
    e2 = np.cross(n, e1)
    ang = np.sort(np.arctan2(rad @ e2, rad @ e1))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
    return n, h, resid, float(gaps.max())


def _candidate_axes(R: RationalMap) -> list[SpherePoint]:
    """Axis candidates from the critical configuration: points, antipodes, pair midpoints."""
    crit = unique_pairs(np.array([p.pair() for p in critical_points(R)]))
    vecs = list(pairs_to_r3(crit))
    for u, v in itertools.combinations(pairs_to_r3(crit), 2):
        s = u + v
        if np.linalg.norm(s) > 1e-6:
            vecs.append(s / np.linalg.norm(s))
    axes: list[np.ndarray] = []
    for v in vecs:
        if all(abs(abs(float(v @ w)) - 1) > 1e-12 and np.linalg.norm(np.cross(v, w)) > 1e-7
               for w in axes):
            axes.append(v)
    return [SpherePoint(*r3_to_pairs(v)) for v in axes]


def _fixed_superattracting(R: RationalMap, p: SpherePoint) -> bool:
    try:
        local_degree(R, p)
        return True
    except NotSuperattracting:
        return False


class _NumericTester:
    def __init__(self, cloud: PointCloud, tol: float, prefilter: int = 400):
        self.cloud = cloud
        self.tol = tol
        self.tree = _tree(cloud.r3())
        idx = np.linspace(0, len(cloud) - 1, min(prefilter, len(cloud))).astype(int)
        self.sub = cloud.pairs[idx]

    def __call__(self, sigma: Isometry) -> float:
        # bounded query first: a point with no neighbour within 2 tol comes back as inf
        moved = pairs_to_r3(apply_pairs(sigma, self.sub))
        near = self.tree.query(moved, distance_upper_bound=2 * self.tol)[0]
        far = ~np.isfinite(near)
        if far.any():
            return float(self.tree.query(moved[far][:20])[0].max())
        image = pairs_to_r3(apply_pairs(sigma, self.cloud.pairs))
        d1 = self.tree.query(image)[0].max()
        d2 = _tree(image).query(self.cloud.r3())[0].max()
        return float(max(d1, d2))


def _commutation_k(Rl: RationalMap, mu: complex, order: int, probes: np.ndarray) -> Optional[int]:
    """Cheap screen for ``Rl(mu z) = mu^k Rl(z)``; returns the only possible k or None."""
    with np.errstate(all="ignore"):
        t = Rl(mu * probes) / Rl(probes)
    if not np.all(np.isfinite(t)) or np.any(np.abs(np.abs(t) - 1) > 1e-6):
        return None
    k = int(round(cmath.phase(t[0]) * order / (2 * math.pi))) % order
    k = k or order
    if np.all(np.abs(t - mu ** k) <= 1e-6):
        return k
    return None


def classify_symmetry_group(R: RationalMap, cloud: Optional[PointCloud] = None,
                            max_order: int = DEFAULT_MAX_ORDER, tol: float = DEFAULT_TOL,
                            samples: int = DEFAULT_CLASSIFY_SAMPLES, seed: int = 0,
                            description: Optional[str] = None) -> SymmetryReport:
    """Find and classify the symmetry group of J(R).

    1. circle test on the sampled cloud (continuous case);
    2. candidate rotation axes from the critical configuration;
    3. rotations of order 2..max_order per axis, accepted algebraically
       (``R s = s^k R``) or numerically (Hausdorff); axes through a
       superattracting fixed point only accept algebraic evidence;
    4. half-turns ``z -> nu/z`` in each axis chart, with ``nu`` drawn from
       products of critical points;
    5. classification of the group the accepted elements generate.

    Completeness is heuristic: only the candidate axes are searched.
    """
    if R.degree < 2:
        raise ValueError("classification needs degree >= 2")
    desc = description or R.to_text()
    notes = ["completeness is heuristic: only axes from the critical configuration are searched",
             "the sufficient commutation criterion assumes R is not a Lattes map"]
    if cloud is None:
        cloud = sample_julia(R, samples, seed=seed)
    tester = _NumericTester(cloud, tol)

    normal, h, resid, gap = fit_circle(cloud)
    if resid <= tol and gap <= CIRCLE_MAX_GAP:
        pole = SpherePoint(*r3_to_pairs(normal))
        axis = (pole, antipode(pole))
        on_circle = SpherePoint(*cloud.pairs[0])
        verified = []
        for desc_s, s in (("rotation by 1 rad about the circle axis", rotation_about(pole, 1.0)),
                          ("half-turn through the circle", rotation_about(on_circle, math.pi))):
            d = tester(s)
            verified.append(VerifiedSymmetry(s, Evidence("hausdorff", d, tol), desc_s))
        notes.append(f"J is a round circle (max residual {resid:.2e}); symmetry group is "
                     "continuous and R or R^2 is conjugate to a Blaschke product")
        return SymmetryReport(desc, verified, GroupClass(GroupTag.CIRCLE, axis=axis), notes)

    probes = np.array([0.6 + 0.3j, -0.4 + 0.9j, 1.3 - 0.7j])
    accepted: list[VerifiedSymmetry] = []
    ambiguous = []
    for p in _candidate_axes(R):
        g = to_zero(p)
        Rl = conjugate(R, g)
        locked = _fixed_superattracting(R, p) or _fixed_superattracting(R, antipode(p))
        for n in range(2, max_order + 1):
            mu = cmath.exp(2j * math.pi / n)
            sigma = rotation_about(p, 2 * math.pi / n)
            label = f"rotation by 2pi/{n} about {p}"
            k = _commutation_k(Rl, mu, n, probes)
            if k is not None:
                ok, res = check_commutation(R, sigma, k)
                if ok:
                    accepted.append(VerifiedSymmetry(sigma, Evidence("commutation", res, MAP_TOL, k), label))
                    continue
            if locked:
                continue
            d = tester(sigma)
            if d <= tol:
                accepted.append(VerifiedSymmetry(sigma, Evidence("hausdorff", d, tol), label))
            elif d <= 2 * tol:
                ambiguous.append((label, d))
        for nu in _inversion_candidates(R, g):
            sigma = compose_iso(inverse(g), compose_iso(inversion(nu), g))
            label = f"half-turn z -> ({nu:.6g})/z in the chart of {p}"
            hit = None
            for k in (1, 2):
                ok, res = check_commutation(R, sigma, k)
                if ok:
                    hit = VerifiedSymmetry(sigma, Evidence("commutation", res, MAP_TOL, k), label)
                    break
            if hit is None:
                d = tester(sigma)
                if d <= tol:
                    hit = VerifiedSymmetry(sigma, Evidence("hausdorff", d, tol), label)
                elif d <= 2 * tol:
                    ambiguous.append((label, d))
            if hit is not None:
                accepted.append(hit)

    verified = _dedupe_verified(accepted)
    inconclusive = bool(ambiguous)
    for label, d in ambiguous:
        notes.append(f"inconclusive: {label} has Hausdorff distance {d:.4f}, within 2x of tol {tol}")
    if any(v.numeric_only for v in verified):
        notes.append("some symmetries rest on numeric (Hausdorff) evidence only")
    try:
        group = classify_finite_group(group_closure([v.isometry for v in verified]))
    except (NotAGroup, UnrecognizedOrder) as exc:
        notes.append(f"inconclusive: accepted elements do not form a recognised finite group ({exc})")
        inconclusive = True
        group = GroupClass(GroupTag.TRIVIAL)
    return SymmetryReport(desc, verified, group, notes, inconclusive)


def _inversion_candidates(R: RationalMap, g: Isometry) -> list[complex]:
    crit = [apply(g, p) for p in critical_points(R)]
    vals = [c.affine for c in crit if not c.is_infinity and abs(c.affine) > 1e-9]
    out: list[complex] = []
    for a in vals:
        for b in vals:
            nu = a * b
            if abs(abs(nu) - 1) <= 1e-6 and all(abs(nu - x) > 1e-7 for x in out):
                out.append(nu / abs(nu))
    return out


def _dedupe_verified(items: list[VerifiedSymmetry]) -> list[VerifiedSymmetry]:
    out: list[VerifiedSymmetry] = []
    for v in sorted(items, key=lambda v: v.evidence.kind != "commutation"):
        if not any(v.isometry.is_close(w.isometry) for w in out):
            out.append(v)
    return out
