"""Kernel suprema and coherence bounds for arbitrary planar arrays."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from ..errors import InvalidParameterError
from ..geometry import ArrayGeometry, normalized_positions
from .ula import k_max, side_bound

HALF_PI = math.pi / 2
_CHUNK = 1 << 16


class DiagonalKernelWarning(UserWarning):
    """Admissible set touches ``x == y``, where the kernel attains ``M^2``."""


def _kernel_and_grad(r: np.ndarray, x: np.ndarray, y: np.ndarray, grad: bool):
    dx = np.stack([np.cos(x) - np.cos(y), np.sin(x) - np.sin(y)], axis=-1)
    e = np.exp(2j * np.pi * (dx @ r.T))
    S = e.sum(axis=-1)
    val = np.abs(S) ** 2
    if not grad:
        return val, None, None
    # d/dx of r . T(x) is r . (-sin x, cos x)
    wx = np.stack([-np.sin(x), np.cos(x)], axis=-1) @ r.T
    wy = np.stack([-np.sin(y), np.cos(y)], axis=-1) @ r.T
    Sx = (2j * np.pi * wx * e).sum(axis=-1)
    Sy = -(2j * np.pi * wy * e).sum(axis=-1)
    return val, 2 * np.real(np.conj(S) * Sx), 2 * np.real(np.conj(S) * Sy)


def phi_general(geom: ArrayGeometry, x, y):
    """``|sum_m exp(j 2 pi r_m . (T(x) - T(y)))|^2``, vectorized over ``x`` and ``y``."""
    r = normalized_positions(geom)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    xf, yf = x.ravel(), y.ravel()
    out = np.empty(xf.size)
    for s in range(0, xf.size, _CHUNK):
        out[s:s + _CHUNK] = _kernel_and_grad(r, xf[s:s + _CHUNK], yf[s:s + _CHUNK], False)[0]
    out = out.reshape(x.shape)
    return out if out.ndim else float(out)


def gradient_bound(geom: ArrayGeometry) -> float:
    """Global Lipschitz constant of :func:`phi_general` (Euclidean norm in ``(x, y)``)."""
    r = np.linalg.norm(normalized_positions(geom), axis=1)
    return 2 * geom.num_antennas * 2 * math.pi * math.sqrt(2) * float(r.sum())


class AdmissibleSet:
    """Set of admissible angle pairs ``(x, y)``.

    Subclasses supply a membership test, a bounding box, a sampling grid and
    optionally a parametrization used for local refinement.
    """

    box: tuple[float, float, float, float]

    def contains(self, x, y) -> np.ndarray:
        raise NotImplementedError

    def grid(self, resolution: float) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def touches_diagonal(self) -> bool:
        return False

    def refine(self, f_and_grad, x0: float, y0: float) -> tuple[float, float, float]:
        """Locally maximize starting from a grid point; default is a box-bounded L-BFGS-B."""
        xlo, xhi, ylo, yhi = self.box

        def obj(p):
            v, gx, gy = f_and_grad(p[0], p[1])
            return -v, -np.array([gx, gy])

        res = minimize(obj, [x0, y0], jac=True, method="L-BFGS-B",
                       bounds=[(xlo, xhi), (ylo, yhi)],
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 200})
        x, y = res.x
        if not self.contains(x, y):
            return x0, y0, f_and_grad(x0, y0)[0]
        return x, y, -res.fun


@dataclass
class BandSet(AdmissibleSet):
    """``{(x, y) in [a, b]^2 : lo <= |y - x| <= hi}``."""

    lo: float
    hi: float
    a: float = -HALF_PI
    b: float = HALF_PI
    box: tuple = field(init=False)

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi) or not self.a < self.b:
            raise InvalidParameterError(f"invalid band [{self.lo}, {self.hi}] on [{self.a}, {self.b}]")
        self.hi = min(self.hi, self.b - self.a)
        if self.lo > self.hi:
            raise InvalidParameterError("band is empty inside the box")
        self.box = (self.a, self.b, self.a, self.b)

    def contains(self, x, y, tol: float = 1e-12):
        x, y = np.asarray(x), np.asarray(y)
        d = np.abs(y - x)
        inside = (x >= self.a - tol) & (x <= self.b + tol) & (y >= self.a - tol) & (y <= self.b + tol)
        return inside & (d >= self.lo - tol) & (d <= self.hi + tol)

    def touches_diagonal(self) -> bool:
        return self.lo == 0

    def _x_range(self, d):
        # x and y = x + d both inside [a, b]
        return np.maximum(self.a, self.a - d), np.minimum(self.b, self.b - d)

    def grid(self, resolution: float):
        nd = max(2, int(math.ceil((self.hi - self.lo) / resolution)) + 1)
        ds = np.linspace(self.lo, self.hi, nd)
        xs, ys = [], []
        for sign in (1.0, -1.0):
            for d in sign * ds:
                x0, x1 = self._x_range(d)
                n = max(2, int(math.ceil((x1 - x0) / resolution)) + 1)
                x = np.linspace(x0, x1, n)
                xs.append(x)
                ys.append(np.clip(x + d, self.a, self.b))
            if self.lo == 0 and sign > 0:
                ds = ds[1:]  # d = 0 already covered
        return np.concatenate(xs), np.concatenate(ys)

    def refine(self, f_and_grad, x0, y0):
        # coordinates (t, d): x = x_lo(d) + t (x_hi(d) - x_lo(d)), y = x + d
        d0 = y0 - x0
        sign = 1.0 if d0 >= 0 else -1.0

        def to_xy(t, d):
            sd = sign * d
            x_lo, x_hi = self._x_range(sd)
            return x_lo + t * (x_hi - x_lo), sd

        def obj(p):
            t, d = p
            sd = sign * d
            x_lo, x_hi = self._x_range(sd)
            x = x_lo + t * (x_hi - x_lo)
            v, gx, gy = f_and_grad(x, x + sd)
            # d x_lo/d(sd) is -1 when sd > 0 ... only one of the two bounds moves
            dlo = -1.0 if sd < 0 else 0.0
            dhi = -1.0 if sd > 0 else 0.0
            dx_dd = sign * (dlo + t * (dhi - dlo))
            grad_t = (gx + gy) * (x_hi - x_lo)
            grad_d = gx * dx_dd + gy * (dx_dd + sign)
            return -v, -np.array([grad_t, grad_d])

        x_lo, x_hi = self._x_range(d0)
        t0 = 0.0 if x_hi == x_lo else (x0 - x_lo) / (x_hi - x_lo)
        res = minimize(obj, [min(max(t0, 0.0), 1.0), abs(d0)], jac=True, method="L-BFGS-B",
                       bounds=[(0.0, 1.0), (self.lo, self.hi)],
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 200})
        x, d = to_xy(*res.x)
        y = float(np.clip(x + d, self.a, self.b))
        return float(x), y, f_and_grad(x, y)[0]


def lemma2_set(eta: float) -> BandSet:
    """Angle pairs in ``[-pi/2, pi/2]^2`` differing by an amount in ``[eta, pi - eta]``."""
    if not 0 < eta <= HALF_PI:
        raise InvalidParameterError(f"eta must lie in (0, pi/2], got {eta}")
    return BandSet(eta, math.pi - eta)


def separation_band(eta: float) -> BandSet:
    """Angle pairs in ``[-pi/2, pi/2]^2`` differing by at least ``eta``."""
    if not 0 < eta < math.pi:
        raise InvalidParameterError(f"eta must lie in (0, pi), got {eta}")
    return BandSet(eta, math.pi)


@dataclass
class PointSet(AdmissibleSet):
    x0: float
    y0: float
    box: tuple = field(init=False)

    def __post_init__(self):
        self.box = (self.x0, self.x0, self.y0, self.y0)

    def contains(self, x, y):
        return (np.asarray(x) == self.x0) & (np.asarray(y) == self.y0)

    def grid(self, resolution):
        return np.array([self.x0]), np.array([self.y0])

    def touches_diagonal(self):
        return self.x0 == self.y0

    def refine(self, f_and_grad, x0, y0):
        return self.x0, self.y0, f_and_grad(self.x0, self.y0)[0]


@dataclass
class PredicateSet(AdmissibleSet):
    """Arbitrary set given by a vectorized predicate and a bounding box.

    The grid is the box lattice filtered by the predicate, so points of the
    set closer to its boundary than one grid step may be under-sampled.
    """

    predicate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    box: tuple[float, float, float, float] = (-HALF_PI, HALF_PI, -HALF_PI, HALF_PI)

    def contains(self, x, y):
        return np.asarray(self.predicate(np.asarray(x), np.asarray(y)), dtype=bool)

    def grid(self, resolution):
        xlo, xhi, ylo, yhi = self.box
        nx = max(2, int(math.ceil((xhi - xlo) / resolution)) + 1)
        ny = max(2, int(math.ceil((yhi - ylo) / resolution)) + 1)
        X, Y = np.meshgrid(np.linspace(xlo, xhi, nx), np.linspace(ylo, yhi, ny), indexing="ij")
        X, Y = X.ravel(), Y.ravel()
        keep = self.contains(X, Y)
        return X[keep], Y[keep]

    def touches_diagonal(self):
        xlo, xhi, ylo, yhi = self.box
        lo, hi = max(xlo, ylo), min(xhi, yhi)
        if lo > hi:
            return False
        t = np.linspace(lo, hi, 1001)
        return bool(np.any(self.contains(t, t)))


def default_resolution(geom: ArrayGeometry) -> float:
    """Grid step resolving the kernel's fastest oscillation with ~32 points per period."""
    rmax = float(np.max(np.linalg.norm(normalized_positions(geom), axis=1)))
    return min(0.01, 1.0 / (32 * max(1.0, 2 * rmax)))


@dataclass(frozen=True)
class SupremumEstimate:
    value: float
    argmax: tuple[float, float]
    grid_value: float
    grid_points: int
    resolution: float
    refine_margin: float


def locate_general_sup(geom: ArrayGeometry, admissible: AdmissibleSet,
                       resolution: float | None = None, candidates: int = 8,
                       refine_tol: float = 1e-9) -> SupremumEstimate:
    """Grid search plus local refinement of the kernel over an admissible set."""
    if resolution is None:
        resolution = default_resolution(geom)
    if not resolution > 0:
        raise InvalidParameterError("resolution must be positive")
    if admissible.touches_diagonal():
        warnings.warn("admissible set touches x == y; kernel supremum is M^2 and the bound "
                      "is trivial", DiagonalKernelWarning, stacklevel=2)
    r = normalized_positions(geom)
    M2 = float(geom.num_antennas) ** 2
    X, Y = admissible.grid(resolution)
    if X.size == 0:
        raise InvalidParameterError("admissible set has no grid points at this resolution")
    vals = phi_general(geom, X, Y)
    order = np.argsort(vals)[::-1]
    picks: list[int] = []
    for i in order:
        # spread candidates over distinct lobes
        if all(math.hypot(X[i] - X[j], Y[i] - Y[j]) > 4 * resolution for j in picks):
            picks.append(int(i))
        if len(picks) >= candidates:
            break

    def f_and_grad(x, y):
        v, gx, gy = _kernel_and_grad(r, np.atleast_1d(x), np.atleast_1d(y), True)
        return float(v[0]), float(gx[0]), float(gy[0])

    best_v, best_xy = float(vals[order[0]]), (float(X[order[0]]), float(Y[order[0]]))
    for i in picks:
        x, y, v = admissible.refine(f_and_grad, float(X[i]), float(Y[i]))
        if v > best_v and bool(admissible.contains(x, y)):
            best_v, best_xy = v, (x, y)
    margin = gradient_bound(geom) * refine_tol
    value = min(best_v + margin, M2)
    return SupremumEstimate(value, best_xy, float(vals[order[0]]), int(X.size),
                            float(resolution), margin)


def general_beta(geom: ArrayGeometry, admissible: AdmissibleSet,
                 resolution: float | None = None) -> float:
    """Supremum of :func:`phi_general` over ``admissible``, in ``[0, M^2]``."""
    return locate_general_sup(geom, admissible, resolution).value


@dataclass(frozen=True)
class GeneralBoundReport:
    K: int
    beta_t: float
    beta_r: float
    k_max: float
    feasible: bool
    mu0_bound: float | None
    mu1_bound: float | None
    grid_resolution: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def general_bounds(tx: ArrayGeometry, rx: ArrayGeometry, K: int, admissible: AdmissibleSet,
                   resolution: float | None = None, beta_scale: float = 1.0) -> GeneralBoundReport:
    """Coherence bounds for arbitrary planar arrays and an admissible angle-pair set."""
    if K < 1 or int(K) != K:
        raise InvalidParameterError(f"K must be a positive integer, got {K}")
    if K == 1:
        return GeneralBoundReport(1, 0.0, 0.0, math.inf, True, 1.0, 1.0, resolution)
    est_t = locate_general_sup(tx, admissible, resolution)
    est_r = locate_general_sup(rx, admissible, resolution)
    beta_t, beta_r = est_t.value * beta_scale, est_r.value * beta_scale
    Mt, Mr = tx.num_antennas, rx.num_antennas
    kmax = k_max((Mt, Mr), (beta_t, beta_r))
    feasible = K <= kmax
    mu0 = mu1 = None
    if feasible:
        mu0 = max(side_bound(Mt, K, beta_t), side_bound(Mr, K, beta_r))
        mu1 = mu0 * math.sqrt(K)
    return GeneralBoundReport(K, beta_t, beta_r, kmax, feasible, mu0, mu1,
                              max(est_t.resolution, est_r.resolution))


def kernel_surface(geom: ArrayGeometry, resolution: float,
                   lo: float = -math.pi, hi: float = math.pi):
    """Kernel values on the square lattice ``[lo, hi]^2`` with the given step.

    Returns ``(axis, values)`` with ``values[i, j] = phi(axis[i], axis[j])``.
    """
    if not resolution > 0:
        raise InvalidParameterError("resolution must be positive")
    n = int(round((hi - lo) / resolution)) + 1
    axis = lo + resolution * np.arange(n)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    return axis, phi_general(geom, X, Y)
