"""Points of the Riemann sphere in homogeneous coordinates.

A point is stored as a pair ``(z1, z2)`` with ``|z1|^2 + |z2|^2 = 1``; the
affine value is ``z1 / z2`` and ``z2 == 0`` is the point at infinity.  The
chordal metric used everywhere is

    rho(z, w) = 2 |z - w| / sqrt((1 + |z|^2)(1 + |w|^2)),

which equals the Euclidean distance between the images of ``z`` and ``w``
on the unit sphere in R^3, so ``0 <= rho <= 2``.

Most heavy lifting elsewhere works on arrays of pairs of shape ``(n, 2)``;
the helpers at the bottom of this module operate on those.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ZeroPair

EQUALITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpherePoint:
    z1: complex
    z2: complex

    def __post_init__(self):
        z1, z2 = complex(self.z1), complex(self.z2)
        norm = math.hypot(abs(z1), abs(z2))
        if norm == 0.0:
            raise ZeroPair("homogeneous pair (0, 0) is not a point")
        if not math.isfinite(norm):
            raise ValueError(f"invalid homogeneous pair ({z1}, {z2})")
        object.__setattr__(self, "z1", z1 / norm)
        object.__setattr__(self, "z2", z2 / norm)

    @classmethod
    def from_complex(cls, z) -> "SpherePoint":
        """Point for an affine value; ``inf`` (or any non-finite) gives infinity."""
        z = complex(z)
        if not cmath.isfinite(z):
            return cls(1.0, 0.0)
        if abs(z) > 1.0:
            return cls(1.0, 1.0 / z)
        return cls(z, 1.0)

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(1.0, 0.0)

    @classmethod
    def from_r3(cls, v) -> "SpherePoint":
        """Inverse stereographic projection of a nonzero vector of R^3."""
        x, y, z = (float(t) for t in v)
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise ValueError("zero vector has no direction")
        x, y, z = x / r, y / r, z / r
        phase = cmath.exp(1j * math.atan2(y, x)) if (x or y) else 1.0
        return cls(math.sqrt(max(0.0, (1 + z) / 2)) * phase, math.sqrt(max(0.0, (1 - z) / 2)))

    @property
    def is_infinity(self) -> bool:
        return abs(self.z2) <= 1e-300

    @property
    def affine(self) -> complex:
        if self.is_infinity:
            return complex(math.inf, 0.0)
        return self.z1 / self.z2

    def pair(self) -> np.ndarray:
        return np.array([self.z1, self.z2], dtype=complex)

    def to_r3(self) -> np.ndarray:
        w = 2 * self.z1 * self.z2.conjugate()
        return np.array([w.real, w.imag, abs(self.z1) ** 2 - abs(self.z2) ** 2])

    def is_close(self, other: "SpherePoint", tol: float = EQUALITY_TOL) -> bool:
        return abs(self.z1 * other.z2 - self.z2 * other.z1) <= tol

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def __repr__(self):
        return f"SpherePoint({format_point(self)})"

    def __str__(self):
        return format_point(self)


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    return min(2.0, 2.0 * abs(p.z1 * q.z2 - p.z2 * q.z1))


def antipode(p: SpherePoint) -> SpherePoint:
    # -1/conj(z) in homogeneous form
    return SpherePoint(-p.z2.conjugate(), p.z1.conjugate())


def format_point(p: SpherePoint) -> str:
    """Text form ``re+imi`` (or ``inf``) used in reports and point-cloud files."""
    if p.is_infinity:
        return "inf"
    z = p.affine
    return f"{_fmt(z.real)}{'-' if math.copysign(1, z.imag) < 0 else '+'}{_fmt(abs(z.imag))}i"


def _fmt(x: float) -> str:
    return repr(float(x)) if x != 0 else "0.0"


_POINT_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\s*$"
)


def parse_point(text: str) -> SpherePoint:
    """Inverse of :func:`format_point`; also accepts plain reals."""
    s = text.strip()
    if s.lower() in ("inf", "infinity", "∞"):
        return SpherePoint.infinity()
    m = _POINT_RE.match(s)
    if m:
        return SpherePoint.from_complex(complex(float(m["re"]), float(m["im"])))
    try:
        return SpherePoint.from_complex(float(s))
    except ValueError:
        raise ValueError(f"cannot parse sphere point {text!r}") from None


# ---------------------------------------------------------------------------
# array helpers: pairs have shape (n, 2), complex
# ---------------------------------------------------------------------------

def normalize_pairs(pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=complex)
    norm = np.sqrt(np.abs(pairs[..., 0]) ** 2 + np.abs(pairs[..., 1]) ** 2)
    return pairs / norm[..., None]


def pairs_from_complex(z) -> np.ndarray:
    """Homogeneous pairs for affine values; non-finite entries become infinity."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape + (2,), dtype=complex)
    finite = np.isfinite(z)
    big = finite & (np.abs(z) > 1.0)
    small = finite & ~big
    out[small, 0] = z[small]
    out[small, 1] = 1.0
    out[big, 0] = 1.0
    out[big, 1] = 1.0 / z[big]
    out[~finite, 0] = 1.0
    out[~finite, 1] = 0.0
    return normalize_pairs(out)


def pairs_to_complex(pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = pairs[..., 0] / pairs[..., 1]
    z[pairs[..., 1] == 0] = complex(np.inf, 0.0)
    return z


def pairs_to_r3(pairs: np.ndarray) -> np.ndarray:
    """Unit vectors in R^3; Euclidean distance between them is chordal distance."""
    pairs = normalize_pairs(pairs)
    w = 2 * pairs[..., 0] * np.conj(pairs[..., 1])
    h = np.abs(pairs[..., 0]) ** 2 - np.abs(pairs[..., 1]) ** 2
    return np.stack([w.real, w.imag, h], axis=-1)


def r3_to_pairs(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`pairs_to_r3`; solves from the larger of ``|z1|``, ``|z2|`` to avoid cancellation."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    w = v[..., 0] + 1j * v[..., 1]
    north = v[..., 2] >= 0
    big = np.sqrt((1 + np.abs(v[..., 2])) / 2)
    z1 = np.where(north, big, w / (2 * big)).astype(complex)
    z2 = np.where(north, np.conj(w) / (2 * big), big).astype(complex)
    return np.stack([z1, z2], axis=-1)


def chordal_distance_pairs(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise (broadcasting) chordal distance between normalized pairs."""
    d = 2.0 * np.abs(p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0])
    return np.minimum(d, 2.0)


def as_pairs(points) -> np.ndarray:
    """Coerce a SpherePoint, a sequence of them, or an ``(n, 2)`` array to pairs."""
    if isinstance(points, SpherePoint):
        return points.pair()[None, :]
    if isinstance(points, np.ndarray) and points.ndim == 2 and points.shape[1] == 2:
        return normalize_pairs(points)
    return np.array([p.pair() for p in points], dtype=complex).reshape(-1, 2)


def points_from_pairs(pairs: np.ndarray) -> list[SpherePoint]:
    return [SpherePoint(a, b) for a, b in np.asarray(pairs)]
