"""Rational maps of the Riemann sphere with complex floating-point coefficients.

``R = P / Q`` with ``P, Q`` coprime.  Dynamics is done on the homogeneous
lift ``R^(z1, z2) = z2^d (P(z1/z2), Q(z1/z2))`` so that poles and the point
at infinity need no special cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateInput
from .isometry import Isometry, inverse
from .roots import poly_roots
from .sphere import SpherePoint, normalize_pairs

MAP_TOL = 1e-9
COMMON_ROOT_TOL = 1e-8
NOISE_TOL = 1e-13


class Polynomial:
    """Complex polynomial, ascending coefficients, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        c = np.trim_zeros(c, "b")
        self.coeffs = c if len(c) else np.zeros(1, dtype=complex)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        if len(self.coeffs) == 1 and self.coeffs[0] == 0:
            return -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, z):
        return npoly.polyval(z, self.coeffs)

    def deriv(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial([0])
        return Polynomial(npoly.polyder(self.coeffs))

    def roots(self) -> np.ndarray:
        return poly_roots(self.coeffs)

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def trimmed(self, rel: float = NOISE_TOL, ref: Optional[float] = None) -> "Polynomial":
        """Drop leading coefficients below ``rel * ref`` (rounding noise)."""
        ref = self.scale() if ref is None else ref
        c = self.coeffs.copy()
        c[np.abs(c) <= rel * ref] = 0
        return Polynomial(c)

    def __add__(self, other):
        return Polynomial(npoly.polyadd(self.coeffs, _poly(other).coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(npoly.polysub(self.coeffs, _poly(other).coeffs))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        return Polynomial(npoly.polymul(self.coeffs, _poly(other).coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __pow__(self, k: int):
        return Polynomial(npoly.polypow(self.coeffs, k)) if k else Polynomial([1])

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"

    def to_text(self, var: str = "z") -> str:
        out = ""
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = complex(self.coeffs[k])
            if c == 0:
                continue
            power = "" if k == 0 else var + (f"^{k}" if k > 1 else "")
            cs = _complex_text(c)
            if power and c == 1:
                term = power
            elif power and c == -1:
                term = "-" + power
            else:
                term = cs + ("*" + power if power else "")
            if not out:
                out = term
            elif term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out or "0"


def _complex_text(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    sign = "-" if c.imag < 0 else "+"
    return f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def _poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


def _divide_linear(c: np.ndarray, r: complex) -> np.ndarray:
    """Quotient of ascending-coefficient polynomial by (z - r), remainder dropped."""
    n = len(c) - 1
    q = np.zeros(n, dtype=complex)
    acc = c[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc = c[k] + acc * r
    return q


def _rel_value(c: np.ndarray, r: complex) -> float:
    ar = abs(r)
    scale = sum(abs(ck) * ar ** k for k, ck in enumerate(c))
    return abs(npoly.polyval(r, c)) / scale if scale else 0.0


def _remove_common_factors(p: np.ndarray, q: np.ndarray):
    # exact common powers of z first
    k = 0
    while k < min(len(p), len(q)) - 1 and p[k] == 0 and q[k] == 0:
        k += 1
    p, q = p[k:], q[k:]
    p, q = np.trim_zeros(p, "b"), np.trim_zeros(q, "b")
    while len(p) > 1 and len(q) > 1:
        small, other = (p, q) if len(p) <= len(q) else (q, p)
        try:
            roots = poly_roots(small)
        except Exception:
            break
        hit = None
        for r in roots:
            if _rel_value(other, r) <= COMMON_ROOT_TOL:
                hit = r
                break
        if hit is None:
            break
        p, q = _divide_linear(p, hit), _divide_linear(q, hit)
    return p, q


class RationalMap:
    """``P / Q`` in lowest terms, scaled so the largest coefficient has modulus 1."""

    __slots__ = ("num", "den", "_lift")

    def __init__(self, num, den=1, reduce: bool = True):
        p, q = _poly(num if isinstance(num, Polynomial) else Polynomial(num)), \
            _poly(den if isinstance(den, Polynomial) else Polynomial(den))
        if q.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        pc, qc = p.coeffs, q.coeffs
        if reduce and not p.is_zero():
            pc, qc = _remove_common_factors(pc, qc)
        s = max(np.max(np.abs(pc)), np.max(np.abs(qc)))
        self.num = Polynomial(pc / s)
        self.den = Polynomial(qc / s)
        self._lift = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def polynomial(cls, coeffs) -> "RationalMap":
        return cls(coeffs, [1])

    @classmethod
    def constant(cls, c: complex) -> "RationalMap":
        return cls([c], [1])

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls([0, 1], [1])

    @classmethod
    def from_isometry(cls, sigma: Isometry) -> "RationalMap":
        a, b = sigma.a, sigma.b
        return cls([-b.conjugate(), a], [a.conjugate(), b], reduce=False)

    # -- basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def __call__(self, z):
        """Affine evaluation; poles give ``inf``."""
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            w = self.num(z) / self.den(z)
        w = np.where(np.isfinite(w), w, complex(np.inf, 0))
        big = ~np.isfinite(z)
        if np.any(big):
            w = np.where(big, self.value_at_infinity(), w)
        return w if w.ndim else complex(w)

    def value_at_infinity(self) -> complex:
        dp, dq = self.num.degree, self.den.degree
        if dp > dq:
            return complex(np.inf, 0)
        if dp < dq:
            return 0j
        return self.num.coeffs[-1] / self.den.coeffs[-1]

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        p, q = self.num, self.den
        return (p.deriv()(z) * q(z) - p(z) * q.deriv()(z)) / q(z) ** 2

    def lift(self) -> "HomogeneousLift":
        if self._lift is None:
            d = self.degree
            self._lift = HomogeneousLift(self.num.padded(d), self.den.padded(d))
        return self._lift

    def eval_pairs(self, pairs: np.ndarray) -> np.ndarray:
        return normalize_pairs(self.lift()(pairs))

    def eval(self, p: SpherePoint) -> SpherePoint:
        w = self.lift()(p.pair()[None, :])[0]
        return SpherePoint(w[0], w[1])

    # -- arithmetic (used by the map-spec parser) ---------------------------
    def _coerce(self, other) -> "RationalMap":
        return other if isinstance(other, RationalMap) else RationalMap.constant(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalMap(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return RationalMap(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalMap(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero map")
        return RationalMap(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return RationalMap(-self.num, self.den, reduce=False)

    def __pow__(self, k: int):
        if k < 0:
            return RationalMap.constant(1) / (self ** (-k))
        return RationalMap(self.num ** k, self.den ** k, reduce=False)

    def is_constant(self) -> bool:
        return self.degree == 0

    def __repr__(self):
        return f"RationalMap(num={self.num.coeffs.tolist()}, den={self.den.coeffs.tolist()})"

    def to_text(self) -> str:
        """Text the map-spec parser reads back."""
        lead = self.den.coeffs[-1]
        num, den = Polynomial(self.num.coeffs / lead), Polynomial(self.den.coeffs / lead)
        if den.degree == 0:
            return num.to_text()
        if not np.any(den.coeffs[:-1]):
            k = den.degree
            return f"({num.to_text()})/z" + (f"^{k}" if k > 1 else "")
        return f"({num.to_text()})/({den.to_text()})"

    __str__ = to_text


@dataclass(frozen=True, eq=False)
class HomogeneousLift:
    """``(z1, z2) -> (sum p_k z1^k z2^(d-k), sum q_k z1^k z2^(d-k))``, max coefficient modulus 1."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p, q = np.asarray(self.p, dtype=complex), np.asarray(self.q, dtype=complex)
        if p.shape != q.shape:
            raise ValueError("lift components must have equal degree")
        s = max(np.max(np.abs(p)), np.max(np.abs(q)))
        object.__setattr__(self, "p", p / s)
        object.__setattr__(self, "q", q / s)

    @property
    def degree(self) -> int:
        return len(self.p) - 1

    def __call__(self, pairs) -> np.ndarray:
        pairs = np.asarray(pairs, dtype=complex)
        z1, z2 = pairs[..., 0], pairs[..., 1]
        d = self.degree
        zp = [np.ones_like(z2)]
        for _ in range(d):
            zp.append(zp[-1] * z2)
        a = np.full_like(z1, self.p[d])
        b = np.full_like(z1, self.q[d])
        for k in range(d - 1, -1, -1):
            a = a * z1 + self.p[k] * zp[d - k]
            b = b * z1 + self.q[k] * zp[d - k]
        return np.stack([a, b], axis=-1)


def lift(R: RationalMap) -> HomogeneousLift:
    return R.lift()


def degree(R: RationalMap) -> int:
    return R.degree


def eval_map(R: RationalMap, p: SpherePoint) -> SpherePoint:
    return R.eval(p)


def compose(R: RationalMap, S: RationalMap) -> RationalMap:
    """``R o S`` by homogeneous substitution ``sum p_k A^k B^(d-k)``."""
    d = R.degree
    A, B = S.num, S.den
    pa = [Polynomial([1])]
    pb = [Polynomial([1])]
    for _ in range(d):
        pa.append(pa[-1] * A)
        pb.append(pb[-1] * B)
    p, q = R.num.padded(d), R.den.padded(d)
    num = Polynomial([0])
    den = Polynomial([0])
    for k in range(d + 1):
        term = pa[k] * pb[d - k]
        if p[k] != 0:
            num = num + term * p[k]
        if q[k] != 0:
            den = den + term * q[k]
    ref = max(num.scale(), den.scale())
    # coprime inputs give a coprime result; only rounding noise is removed
    return RationalMap(num.trimmed(ref=ref), den.trimmed(ref=ref), reduce=False)


def map_residual(R: RationalMap, S: RationalMap) -> float:
    """Largest coefficient of ``P_R Q_S - P_S Q_R`` with both maps scaled to unit max coefficient."""
    diff = R.num * S.den - S.num * R.den
    return float(np.max(np.abs(diff.coeffs)))


def equals(R: RationalMap, S: RationalMap, tol: float = MAP_TOL) -> bool:
    return map_residual(R, S) <= tol


def conjugate(R: RationalMap, sigma: Isometry) -> RationalMap:
    """``sigma o R o sigma^-1``."""
    s = RationalMap.from_isometry(sigma)
    si = RationalMap.from_isometry(inverse(sigma))
    return compose(s, compose(R, si))


def critical_points(R: RationalMap) -> list[SpherePoint]:
    """The ``2d - 2`` critical points with multiplicity.

    Finite ones are the roots of ``P'Q - PQ'``; the deficit in its degree is
    the multiplicity of infinity.
    """
    d = R.degree
    if d < 2:
        raise DegenerateInput("critical points need degree >= 2")
    P, Q = R.num, R.den
    W = P.deriv() * Q - P * Q.deriv()
    W = W.trimmed(rel=1e-12, ref=max(P.scale(), Q.scale()))
    pts = [SpherePoint.from_complex(r) for r in (W.roots() if W.degree >= 1 else [])]
    pts += [SpherePoint.infinity()] * (2 * d - 2 - max(W.degree, 0))
    return pts


def newton_map(p) -> RationalMap:
    """``N(z) = z - p/p'`` for a squarefree polynomial of degree >= 2."""
    p = p if isinstance(p, Polynomial) else Polynomial(p)
    if p.degree < 2:
        raise DegenerateInput("Newton map needs degree >= 2")
    dp = p.deriv()
    for r in dp.roots():
        if _rel_value(p.coeffs, r) <= COMMON_ROOT_TOL:
            raise DegenerateInput("polynomial has a repeated root")
    z = Polynomial([0, 1])
    return RationalMap(z * dp - p, dp, reduce=False)


def isometry_from_map(R: RationalMap, tol: float = 1e-9) -> Optional[Isometry]:
    """The isometry a degree-1 map equals, or None if it is not an isometry."""
    if R.degree != 1:
        return None
    p, q = R.num.padded(1), R.den.padded(1)
    m = np.array([[p[1], p[0]], [q[1], q[0]]])
    det = np.linalg.det(m)
    if det == 0:
        return None
    m = m / np.sqrt(det)
    if np.max(np.abs(m @ m.conj().T - np.eye(2))) > tol:
        return None
    return Isometry.from_matrix(m)


def preimage_pairs(R: RationalMap, p: SpherePoint) -> np.ndarray:
    """All ``d`` preimages of ``p`` with multiplicity, as normalized pairs."""
    L = R.lift()
    d = L.degree
    c = p.z2 * L.p - p.z1 * L.q
    ref = np.max(np.abs(c))
    c = np.where(np.abs(c) <= 1e-14 * ref, 0, c)
    nz = np.flatnonzero(c)
    lo, hi = nz[0], nz[-1]
    out = [np.array([0.0, 1.0])] * lo + [np.array([1.0, 0.0])] * (d - hi)
    mid = c[lo:hi + 1]
    if len(mid) > 1:
        for r in poly_roots(mid):
            out.append(np.array([r, 1.0]) if abs(r) <= 1 else np.array([1.0, 1.0 / r]))
    return normalize_pairs(np.array(out, dtype=complex).reshape(-1, 2))


def rational_map(num: Sequence[complex], den: Sequence[complex] = (1,)) -> RationalMap:
    return RationalMap(num, den)
