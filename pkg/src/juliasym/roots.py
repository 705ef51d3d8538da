"""Simultaneous-iteration polynomial root finding (Aberth-Ehrlich).

Coefficients are always in ascending order.  The batch solver works on many
polynomials of the same degree at once; it is what the backward-orbit
sampler uses for its preimage solves.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence

MAX_ITER = 200
START_ANGLE = 0.4
RESIDUAL_TOL = 1e-8
_EPS = np.finfo(float).eps


def _horner(c: np.ndarray, z: np.ndarray):
    """Value, derivative and rounding scale sum |c_k||z|^k; ``c`` is (B, n+1), ``z`` is (B, n)."""
    n = c.shape[1] - 1
    p = np.broadcast_to(c[:, n:n + 1], z.shape).astype(complex)
    dp = np.zeros_like(p)
    az = np.abs(z)
    scale = np.broadcast_to(np.abs(c[:, n:n + 1]), z.shape).astype(float)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[:, k:k + 1]
        scale = scale * az + np.abs(c[:, k:k + 1])
    return p, dp, scale


def aberth_batch(coeffs, max_iter: int = MAX_ITER):
    """Roots of each row of ``coeffs`` (shape ``(B, n+1)``, nonzero leading entries).

    Returns ``(roots, ok)`` where ``roots`` has shape ``(B, n)`` and ``ok``
    flags rows whose every root passes the relative residual test
    ``|p(r)| <= RESIDUAL_TOL * sum |c_k| |r|^k``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 2 or c.shape[1] < 2:
        raise ValueError("need a (B, n+1) coefficient array with n >= 1")
    lead = c[:, -1:]
    if np.any(lead == 0):
        raise ValueError("leading coefficient must be nonzero")
    c = c / lead
    B, n = c.shape[0], c.shape[1] - 1
    if n == 1:
        roots = -c[:, :1]
        return roots, np.ones(B, dtype=bool)

    radius = 1.0 + np.max(np.abs(c[:, :-1]), axis=1)
    angles = 2 * np.pi * np.arange(n) / n + START_ANGLE
    z = radius[:, None] * np.exp(1j * angles)[None, :]
    done = np.zeros((B, n), dtype=bool)
    offdiag = ~np.eye(n, dtype=bool)

    for _ in range(max_iter):
        p, dp, scale = _horner(c, z)
        done |= np.abs(p) <= 4 * _EPS * scale
        if done.all():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            diff = z[:, :, None] - z[:, None, :]
            inv = np.where(offdiag, 1.0 / np.where(offdiag, diff, 1.0), 0.0)
            s = inv.sum(axis=2)
            corr = w / (1.0 - w * s)
        bad = ~np.isfinite(corr)
        if bad.any():
            corr[bad] = 1e-3 * (1.0 + np.abs(z[bad])) * np.exp(1j * START_ANGLE)
        small = np.abs(corr) <= 1e-15 * np.abs(z)
        z = np.where(done, z, z - corr)
        done |= small

    p, _, scale = _horner(c, z)
    with np.errstate(invalid="ignore"):
        ok = np.all((np.abs(p) <= RESIDUAL_TOL * scale) & np.isfinite(z), axis=1)
    return z, ok


def poly_roots(coeffs, max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots with multiplicity of a polynomial given by ascending coefficients.

    Exact zero low-order coefficients are factored out first, so a root at 0
    of multiplicity k is returned exactly.  Raises NoConvergence when the
    iteration does not reach the residual bound.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) < 2:
        raise ValueError("polynomial must have degree >= 1")
    nz = np.flatnonzero(c)[0]
    zeros = np.zeros(nz, dtype=complex)
    c = c[nz:]
    if len(c) < 2:
        return zeros
    roots, ok = aberth_batch(c[None, :], max_iter)
    if not ok[0]:
        raise NoConvergence(f"root finder did not converge in {max_iter} iterations")
    return np.concatenate([zeros, roots[0]])
