"""The family ``R(z) = z^m + lambda / z^d``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Raster, pixel_grid
from .errors import InvalidExponents
from .isometry import GroupClass, GroupTag, Isometry, inversion, rotation
from .rational import RationalMap
from .sphere import SpherePoint

UNIT_TOL = 1e-12
NEAR_BOUNDARY = 1e-3
PARAM_WINDOW = (0.0, 0.0, 4.0)
PARAM_MAX_ITER = 512
_AXIS = (SpherePoint(0.0, 1.0), SpherePoint(1.0, 0.0))


@dataclass(frozen=True)
class McMullenParams:
    m: int
    d: int
    lam: complex = 0j

    def __post_init__(self):
        if int(self.m) != self.m or int(self.d) != self.d:
            raise InvalidExponents("m and d must be integers")
        if self.m < 2 or self.d < 1:
            raise InvalidExponents(f"need m >= 2 and d >= 1, got m={self.m}, d={self.d}")
        object.__setattr__(self, "lam", complex(self.lam))

    @property
    def on_unit_circle(self) -> bool:
        return abs(abs(self.lam) - 1) <= UNIT_TOL

    @property
    def near_boundary(self) -> bool:
        return self.m == self.d and abs(abs(self.lam) - 1) < NEAR_BOUNDARY


def make_mcmullen(params: McMullenParams) -> RationalMap:
    m, d, lam = params.m, params.d, params.lam
    if lam == 0:
        return RationalMap.polynomial([0] * m + [1])
    num = np.zeros(m + d + 1, dtype=complex)
    num[0], num[-1] = lam, 1
    den = np.zeros(d + 1, dtype=complex)
    den[-1] = 1
    return RationalMap(num, den)


def classify_mcmullen_symmetries(params: McMullenParams) -> GroupClass:
    """Closed-form symmetry group about the axis {0, inf}."""
    if params.lam == 0:
        return GroupClass(GroupTag.CIRCLE, axis=_AXIS)
    n = params.m + params.d
    if params.m == params.d and params.on_unit_circle:
        return GroupClass(GroupTag.DIHEDRAL, n, _AXIS)
    return GroupClass(GroupTag.CYCLIC, n, _AXIS)


def symmetry_elements(params: McMullenParams) -> list[Isometry]:
    """Explicit elements of the finite group: rotations by (m+d)-th roots of unity
    and, in the dihedral case, the half-turns ``z -> c/z`` with ``c^(2m) = lambda^2``."""
    if params.lam == 0:
        raise ValueError("lambda = 0 has a continuous symmetry group")
    n = params.m + params.d
    out = [rotation(cmath.exp(2j * math.pi * j / n)) for j in range(n)]
    if params.m == params.d and params.on_unit_circle:
        c0 = params.lam ** (1 / params.m)
        out += [inversion(c0 * cmath.exp(1j * math.pi * j / params.m)) for j in range(2 * params.m)]
    return out


def escape_radius(params: McMullenParams) -> float:
    """``r`` with ``|z| >= r  =>  |R(z)| >= 2|z|``.

    For ``|z| >= r >= 1``: ``|R(z)| >= |z|^m - |lam| >= (2+|lam|)|z| - |lam| >= 2|z|``.
    """
    return max(2.0, (2 + abs(params.lam)) ** (1 / (params.m - 1)))


def free_critical_point(m: int, d: int, lam) -> np.ndarray:
    """Principal branch of ``(d lam / m)^(1/(m+d))``."""
    lam = np.asarray(lam, dtype=complex)
    return (d * lam / m) ** (1 / (m + d))


@dataclass
class Overlay:
    """Geometry drawn on a parameter-plane image."""

    origin: bool
    unit_circle: bool

    def to_dict(self) -> dict:
        items = []
        if self.origin:
            items.append({"kind": "point", "center": [0.0, 0.0], "label": "lambda = 0"})
        if self.unit_circle:
            items.append({"kind": "circle", "center": [0.0, 0.0], "radius": 1.0,
                          "label": "|lambda| = 1 symmetry regime boundary"})
        return {"overlay": items}


def render_parameter_plane(m: int, d: int, window=PARAM_WINDOW, resolution=(400, 400),
                           max_iter: int = PARAM_MAX_ITER) -> tuple[Raster, Overlay]:
    """Critical-orbit escape raster over the lambda plane.

    Pixels whose free critical orbit stays bounded for ``max_iter`` steps
    (including ``lambda = 0``) are the non-escaped ones.
    """
    McMullenParams(m, d)
    lam = pixel_grid(window, resolution).ravel()
    H, W = int(resolution[1]), int(resolution[0])
    radius = np.maximum(2.0, (2 + np.abs(lam)) ** (1 / (m - 1)))
    z = free_critical_point(m, d, lam)
    n = lam.size
    escaped = np.zeros(n, dtype=bool)
    iters = np.zeros(n, dtype=np.int64)
    active = np.flatnonzero(lam != 0)
    for it in range(1, max_iter + 1):
        if active.size == 0:
            break
        za = z[active]
        with np.errstate(all="ignore"):
            zn = za ** m + lam[active] / za ** d
        esc = ~np.isfinite(zn) | (np.abs(zn) > radius[active])
        z[active] = zn
        iters[active] = it
        escaped[active[esc]] = True
        active = active[~esc]
    with np.errstate(invalid="ignore"):
        fm = np.abs(z)
    raster = Raster(W, H, tuple(float(t) for t in window), max_iter,
                    escaped.reshape(H, W), iters.reshape(H, W), fm.reshape(H, W),
                    np.zeros((H, W), dtype=bool), z.reshape(H, W),
                    {"m": m, "d": d, "plane": "parameter"})
    return raster, Overlay(origin=True, unit_circle=(m == d))
