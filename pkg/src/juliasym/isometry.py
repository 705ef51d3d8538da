"""Holomorphic isometries of the Riemann sphere and their finite groups.

An isometry is ``z -> (a z - conj(b)) / (b z + conj(a))`` with
``|a|^2 + |b|^2 = 1``, i.e. the SU(2) matrix ``[[a, -conj(b)], [b, conj(a)]]``
acting on homogeneous pairs.  The pairs ``(a, b)`` and ``(-a, -b)`` give the
same map; instances are canonicalized so the first non-negligible component
has argument in ``[0, pi)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import IdentityHasNoAxis, NotAGroup, UnrecognizedOrder, ZeroPair
from .sphere import SpherePoint, chordal_distance

ELEMENT_TOL = 1e-9
CLOSURE_CAP = 200


@dataclass(frozen=True, eq=False)
class Isometry:
    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        norm = math.hypot(abs(a), abs(b))
        if norm == 0.0:
            raise ZeroPair("isometry needs (a, b) != (0, 0)")
        a, b = a / norm, b / norm
        lead = a if abs(a) > 1e-12 else b
        arg = cmath.phase(lead)
        if arg < 0 or arg >= math.pi:
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]])

    @classmethod
    def from_matrix(cls, m) -> "Isometry":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[1, 0])

    def __call__(self, p):
        return apply(self, p)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def is_close(self, other: "Isometry", tol: float = ELEMENT_TOL) -> bool:
        d1 = abs(self.a - other.a) + abs(self.b - other.b)
        d2 = abs(self.a + other.a) + abs(self.b + other.b)
        return min(d1, d2) <= tol

    def __eq__(self, other):
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def is_identity(self, tol: float = ELEMENT_TOL) -> bool:
        return self.is_close(IDENTITY, tol)

    def __str__(self):
        return f"mobius(a={_cfmt(self.a)}, b={_cfmt(self.b)})"

    __repr__ = __str__


def _cfmt(z: complex) -> str:
    return f"({z.real!r}{'-' if math.copysign(1, z.imag) < 0 else '+'}{abs(z.imag)!r}i)"


IDENTITY = Isometry(1.0, 0.0)


def make_isometry(a: complex, b: complex) -> Isometry:
    return Isometry(a, b)


def rotation(mu: complex) -> Isometry:
    """``z -> mu z`` for ``|mu| = 1``."""
    mu = complex(mu) / abs(mu)
    return Isometry(cmath.sqrt(mu), 0.0)


def inversion(mu: complex) -> Isometry:
    """``z -> mu / z`` for ``|mu| = 1`` (a half-turn about an equatorial axis)."""
    mu = complex(mu) / abs(mu)
    return Isometry(0.0, cmath.sqrt(-mu).conjugate())


def to_zero(p: SpherePoint) -> Isometry:
    """An isometry sending ``p`` to 0 (and its antipode to infinity)."""
    return Isometry(p.z2, p.z1.conjugate())


def rotation_about(axis: SpherePoint, angle: float) -> Isometry:
    """Rotation by ``angle`` about ``axis``: in a chart with ``axis = 0`` it is ``z -> e^{i angle} z``."""
    g = to_zero(axis)
    return compose(inverse(g), compose(rotation(cmath.exp(1j * angle)), g))


def apply(sigma: Isometry, p):
    """Act on a SpherePoint, or on an ``(n, 2)`` array of homogeneous pairs."""
    if isinstance(p, SpherePoint):
        a, b = sigma.a, sigma.b
        return SpherePoint(a * p.z1 - b.conjugate() * p.z2, b * p.z1 + a.conjugate() * p.z2)
    return apply_pairs(sigma, p)


def apply_pairs(sigma: Isometry, pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=complex)
    return pairs @ sigma.matrix.T


def compose(sigma: Isometry, tau: Isometry) -> Isometry:
    """``sigma o tau`` (tau acts first)."""
    return Isometry.from_matrix(sigma.matrix @ tau.matrix)


def inverse(sigma: Isometry) -> Isometry:
    return Isometry(sigma.a.conjugate(), -sigma.b)


def power(sigma: Isometry, k: int) -> Isometry:
    if k < 0:
        return power(inverse(sigma), -k)
    return Isometry.from_matrix(np.linalg.matrix_power(sigma.matrix, k))


def fixed_points(sigma: Isometry) -> tuple[SpherePoint, SpherePoint]:
    """The antipodal pair fixed by a non-identity isometry.

    Solves ``b z^2 - 2i Im(a) z + conj(b) = 0`` in homogeneous form, taking
    the root branch that avoids cancellation.
    """
    a, b = sigma.a, sigma.b
    s = math.hypot(a.imag, abs(b))  # sin(theta/2)
    if s <= 1e-12:
        raise IdentityHasNoAxis("the identity fixes every point")
    if abs(b) <= 1e-15:
        return SpherePoint(0.0, 1.0), SpherePoint(1.0, 0.0)
    if a.imag >= 0:
        t = 1j * (a.imag + s)
    else:
        t = 1j * (a.imag - s)
    p = SpherePoint(t, b)
    q = SpherePoint(b.conjugate(), t)
    return p, q


def _eigen_angle(sigma: Isometry, p: SpherePoint) -> float:
    v = p.pair()
    lam = np.vdot(v, sigma.matrix @ v)
    return (-2.0 * cmath.phase(lam)) % (2 * math.pi)


def rotation_axis_angle(sigma: Isometry) -> tuple[SpherePoint, float]:
    """Axis (a fixed point) and rotation angle in ``(0, 2pi)``.

    The axis is chosen so the angle lies in ``(0, pi]``; for half-turns the
    fixed point nearer to 0 wins, then the one with larger real part.
    """
    p, q = fixed_points(sigma)
    ap, aq = _eigen_angle(sigma, p), _eigen_angle(sigma, q)
    if abs(ap - math.pi) < 1e-9 and abs(aq - math.pi) < 1e-9:
        zero = SpherePoint(0.0, 1.0)
        dp, dq = chordal_distance(p, zero), chordal_distance(q, zero)
        if abs(dp - dq) > 1e-9:
            return (p, math.pi) if dp < dq else (q, math.pi)
        rp = -math.inf if p.is_infinity else p.affine.real
        rq = -math.inf if q.is_infinity else q.affine.real
        return (p, math.pi) if rp >= rq else (q, math.pi)
    return (p, ap) if ap <= math.pi else (q, aq)


def rotation_angle(sigma: Isometry) -> float:
    """Minimal rotation angle in ``[0, pi]``."""
    a = sigma.a
    return 2.0 * math.atan2(math.hypot(a.imag, abs(sigma.b)), abs(a.real))


def element_order(sigma: Isometry, cap: int = CLOSURE_CAP, tol: float = 1e-7) -> Optional[int]:
    """Smallest ``n >= 1`` with ``sigma^n = id``; None if above ``cap``."""
    frac = rotation_angle(sigma) / (2 * math.pi)
    for n in range(1, cap + 1):
        x = n * frac
        if abs(x - round(x)) <= tol * n:
            return n
    return None


# ---------------------------------------------------------------------------
# group classification
# ---------------------------------------------------------------------------

class GroupTag(str, Enum):
    TRIVIAL = "Trivial"
    CYCLIC = "Cyclic"
    DIHEDRAL = "Dihedral"
    TETRAHEDRAL = "Tetrahedral"
    OCTAHEDRAL = "Octahedral"
    ICOSAHEDRAL = "Icosahedral"
    CIRCLE = "CircleWithInversions"
    FULL = "FullIsometryGroup"


@dataclass(frozen=True)
class GroupClass:
    tag: GroupTag
    k: Optional[int] = None
    axis: Optional[tuple[SpherePoint, SpherePoint]] = None

    def __post_init__(self):
        object.__setattr__(self, "tag", GroupTag(self.tag))
        if self.tag in (GroupTag.CYCLIC, GroupTag.DIHEDRAL):
            if self.k is None or self.k < 2:
                raise ValueError(f"{self.tag.value} needs k >= 2")

    @property
    def order(self) -> float:
        return {
            GroupTag.TRIVIAL: 1,
            GroupTag.CYCLIC: self.k,
            GroupTag.DIHEDRAL: 2 * (self.k or 0),
            GroupTag.TETRAHEDRAL: 12,
            GroupTag.OCTAHEDRAL: 24,
            GroupTag.ICOSAHEDRAL: 60,
            GroupTag.CIRCLE: math.inf,
            GroupTag.FULL: math.inf,
        }[self.tag]

    def same_type(self, other: "GroupClass") -> bool:
        return self.tag == other.tag and self.k == other.k

    def __str__(self):
        if self.k is not None:
            return f"{self.tag.value}({self.k})"
        return self.tag.value

    def to_dict(self) -> dict:
        return {
            "tag": self.tag.value,
            "k": self.k,
            "order": None if math.isinf(self.order) else int(self.order),
            "axis": None if self.axis is None else [str(p) for p in self.axis],
        }


class _ElementSet:
    """Tolerance-deduplicated collection of isometries."""

    def __init__(self, tol: float = ELEMENT_TOL):
        self.tol = tol
        self.items: list[Isometry] = []
        self._ab = np.empty((0, 2), dtype=complex)

    def find(self, g: Isometry) -> int:
        if not self.items:
            return -1
        v = np.array([g.a, g.b])
        d = np.minimum(np.abs(self._ab - v).sum(axis=1), np.abs(self._ab + v).sum(axis=1))
        i = int(np.argmin(d))
        return i if d[i] <= self.tol else -1

    def add(self, g: Isometry) -> bool:
        if self.find(g) >= 0:
            return False
        self.items.append(g)
        self._ab = np.vstack([self._ab, [[g.a, g.b]]])
        return True

    def __len__(self):
        return len(self.items)


def dedupe(elements: Iterable[Isometry], tol: float = ELEMENT_TOL) -> list[Isometry]:
    s = _ElementSet(tol)
    for g in elements:
        s.add(g)
    return s.items


def group_closure(generators: Iterable[Isometry], cap: int = CLOSURE_CAP,
                  tol: float = ELEMENT_TOL) -> list[Isometry]:
    """All products of the generators; NotAGroup when more than ``cap`` elements appear."""
    gens = dedupe(generators, tol)
    s = _ElementSet(tol)
    s.add(IDENTITY)
    frontier = [IDENTITY]
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                x = compose(h, g)
                if s.add(x):
                    new.append(x)
                    if len(s) > cap:
                        raise NotAGroup(f"closure exceeds {cap} elements; tolerance drift or infinite group")
        frontier = new
    return s.items


def _is_closed(items: list[Isometry], tol: float) -> bool:
    s = _ElementSet(tol)
    for g in items:
        s.add(g)
    if s.find(IDENTITY) < 0:
        return False
    for g in items:
        if s.find(inverse(g)) < 0:
            return False
        for h in items:
            if s.find(compose(g, h)) < 0:
                return False
    return True


def classify_finite_group(elements: Iterable[Isometry], tol: float = ELEMENT_TOL) -> GroupClass:
    """Identify a finite subgroup of the sphere's rotation group.

    Uses the order ``n`` and the largest element order: cyclic groups contain
    an element of order ``n``, dihedral groups one of order ``n/2``, and the
    polyhedral groups have orders 12/24/60 with maximal element order 3/4/5.
    """
    items = dedupe(elements, tol)
    if len(items) > CLOSURE_CAP:
        raise NotAGroup(f"{len(items)} elements exceeds the cap of {CLOSURE_CAP}")
    if not items or not _is_closed(items, tol):
        raise NotAGroup("elements are not closed under composition and inverses")
    n = len(items)
    if n == 1:
        return GroupClass(GroupTag.TRIVIAL)
    orders = [element_order(g) for g in items]
    if any(o is None for o in orders):
        raise NotAGroup("element of unbounded order")
    top = max(orders)
    gen = items[orders.index(top)]
    if top == n:
        return GroupClass(GroupTag.CYCLIC, n, fixed_points(gen))
    if 2 * top == n:
        return GroupClass(GroupTag.DIHEDRAL, top, fixed_points(gen))
    if (n, top) == (12, 3):
        return GroupClass(GroupTag.TETRAHEDRAL)
    if (n, top) == (24, 4):
        return GroupClass(GroupTag.OCTAHEDRAL)
    if (n, top) == (60, 5):
        return GroupClass(GroupTag.ICOSAHEDRAL)
    raise UnrecognizedOrder(f"group of order {n} with maximal element order {top}")


# ---------------------------------------------------------------------------
# standard generators
# ---------------------------------------------------------------------------

def cyclic_group(k: int, axis: Optional[SpherePoint] = None) -> list[Isometry]:
    axis = axis or SpherePoint(0.0, 1.0)
    return [rotation_about(axis, 2 * math.pi * j / k) for j in range(k)]


def dihedral_group(k: int) -> list[Isometry]:
    """Rotations ``z -> w z`` and inversions ``z -> w / z`` for ``w^k = 1``."""
    roots = [cmath.exp(2j * math.pi * j / k) for j in range(k)]
    return [rotation(w) for w in roots] + [inversion(w) for w in roots]


def _about_vector(v: Sequence[float], angle: float) -> Isometry:
    return rotation_about(SpherePoint.from_r3(v), angle)


def tetrahedral_generators() -> list[Isometry]:
    return [_about_vector((1, 1, 1), 2 * math.pi / 3), _about_vector((1, 0, 0), math.pi)]


def octahedral_generators() -> list[Isometry]:
    return [_about_vector((0, 0, 1), math.pi / 2), _about_vector((1, 1, 1), 2 * math.pi / 3)]


def icosahedral_generators() -> list[Isometry]:
    phi = (1 + math.sqrt(5)) / 2
    return [_about_vector((0, 1, phi), 2 * math.pi / 5), _about_vector((0, 0, 1), math.pi)]


def transport_axis(gamma: Isometry, axis: Optional[tuple[SpherePoint, SpherePoint]]):
    if axis is None:
        return None
    return tuple(apply(gamma, p) for p in axis)


def same_axis(u: tuple[SpherePoint, SpherePoint], v: tuple[SpherePoint, SpherePoint],
              tol: float = 1e-7) -> bool:
    """Axes as unordered antipodal pairs."""
    return any(chordal_distance(u[0], w) <= tol for w in v)
