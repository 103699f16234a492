"""Squared Dirichlet kernel, wrap distance and the separation suprema built on them."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import InvalidParameterError, UnboundedSupremumError

GRID_POINTS_PER_LOBE = 64
_INV_PHI = (math.sqrt(5) - 1) / 2


def dirichlet_sq(M: int, x):
    """``sin^2(pi M x) / sin^2(pi x)``, equal to ``M^2`` at integers.

    Vectorized over ``x``. ``M`` must be a positive integer so the kernel is
    1-periodic; ``x`` is reduced to ``[-1/2, 1/2]`` before evaluation.
    """
    x = np.asarray(x, dtype=float)
    r = x - np.round(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = (np.sin(np.pi * M * r) / np.sin(np.pi * r)) ** 2
    val = np.where(r == 0, float(M) ** 2, val)
    return val if val.ndim else float(val)


def wrap_g(x):
    """Distance from ``x >= 0`` to the nearest integer, in ``[0, 1/2]``."""
    x = np.asarray(x, dtype=float)
    up = np.ceil(x) - x
    val = np.where(up <= 0.5, up, x - np.floor(x))
    return val if val.ndim else float(val)


def min_separation_xi(spacing_over_lambda: float, angles: Sequence[float]) -> float:
    """``min_{i != j} wrap_g((d/lambda) |sin a_i - sin a_j|)`` over unordered pairs."""
    a = np.asarray(angles, dtype=float).ravel()
    if a.size < 2:
        raise InvalidParameterError("separation needs at least two angles")
    if not spacing_over_lambda > 0:
        raise InvalidParameterError("spacing_over_lambda must be positive")
    s = np.sin(a)
    i, j = np.triu_indices(a.size, k=1)
    return float(np.min(wrap_g(spacing_over_lambda * np.abs(s[i] - s[j]))))


def _derivative_bound(M: int, xi: float) -> float:
    # |d/dx sin^2(pi M x)/sin^2(pi x)| on [xi, 1/2]
    s = math.sin(math.pi * xi)
    return math.pi * M / s**2 + 2 * math.pi * math.cos(math.pi * xi) / s**3


def _golden_max(f, a: float, b: float, width: float = 1e-13) -> tuple[float, float, float]:
    """Golden-section search for a unimodal maximum; returns ``(x, f(x), bracket)``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x), b - a


def beta_sup_finite(M: int, xi: float, refine_candidates: int = 3) -> float:
    """Supremum of :func:`dirichlet_sq` over ``[xi, 1/2]``.

    Uniform grid with step at most ``1/(64 M)`` (endpoints included), then
    golden-section refinement around the best grid-local maxima. The result is
    inflated by ``bracket width * max |f'|`` so it never undershoots the true
    supremum by more than floating-point error.
    """
    if int(M) != M or M < 1:
        raise InvalidParameterError(f"M must be a positive integer, got {M}")
    if not xi > 0:
        raise UnboundedSupremumError(f"xi must be > 0 (kernel peak M^2 at 0), got {xi}")
    if xi > 0.5:
        raise InvalidParameterError(f"xi must lie in (0, 1/2], got {xi}")
    M = int(M)
    if xi == 0.5:
        return dirichlet_sq(M, 0.5)
    n = int(math.ceil((0.5 - xi) * GRID_POINTS_PER_LOBE * M)) + 1
    grid = np.linspace(xi, 0.5, max(n, 3))
    h = grid[1] - grid[0]
    vals = dirichlet_sq(M, grid)
    # grid-local maxima (plateaus and endpoints included)
    padded = np.concatenate([[-np.inf], vals, [-np.inf]])
    is_peak = (vals >= padded[:-2]) & (vals >= padded[2:])
    peaks = np.flatnonzero(is_peak)
    peaks = peaks[np.argsort(vals[peaks])[::-1][:refine_candidates]]
    best = float(vals.max())
    slack = 0.0
    f = lambda t: dirichlet_sq(M, t)
    for p in peaks:
        lo, hi = max(xi, grid[p] - h), min(0.5, grid[p] + h)
        _, fx, width = _golden_max(f, lo, hi)
        best = max(best, fx)
        slack = max(slack, width)
    # the kernel never exceeds M^2, which also absorbs margins that overflow for tiny xi
    if math.sin(math.pi * xi) ** 3 == 0.0:
        return float(M * M)
    return float(min(best + slack * _derivative_bound(M, xi), M * M))


def beta_sup_uniform(xi: float) -> float:
    """Supremum of ``sin^2(pi M x)/sin^2(pi x)`` over ``x in [xi, 1/2]`` and all real ``M > 0``.

    Closed form ``1 / sin^2(pi xi)``: the numerator reaches 1 for a suitable
    real ``M`` at every ``x``, and ``1/sin^2`` decreases on ``(0, 1/2]``.
    """
    if not xi > 0:
        raise UnboundedSupremumError(f"xi must be > 0, got {xi}")
    if xi > 0.5:
        raise InvalidParameterError(f"xi must lie in (0, 1/2], got {xi}")
    s2 = math.sin(math.pi * xi) ** 2
    return 1.0 / s2 if s2 > 0 else math.inf


def lemma2_xi(eta: float) -> float:
    """Worst-case separation ``1 - cos(eta/2)`` for half-wavelength ULAs.

    Valid when every pair of target angles in ``[-pi/2, pi/2]`` differs by an
    amount in ``[eta, pi - eta]`` with ``0 < eta <= pi/2``.
    """
    if not 0 < eta <= math.pi / 2:
        raise InvalidParameterError(f"eta must lie in (0, pi/2], got {eta}")
    return 1.0 - math.cos(eta / 2)
