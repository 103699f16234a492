"""Nuclear-norm matrix completion: singular value thresholding and its noisy variant."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError
from .signal import PartialObservation

DIVERGENCE_FACTOR = 10.0
DIVERGENCE_PATIENCE = 50
MONOTONE_WINDOW = 20
MAX_DEFAULT_STEP = 1.9


@dataclass(frozen=True)
class SolverParams:
    """Settings for :func:`svt_complete`; ``None`` fields are filled from the problem.

    ``method="admm"`` (default) solves the equality-constrained nuclear-norm
    program exactly with an augmented Lagrangian whose primal step is a
    singular value shrinkage by ``1/penalty``; ``penalty`` defaults to
    ``1 / rms(observed values)`` and is adapted by residual balancing.

    ``method="svt"`` runs the classic singular value thresholding recursion,
    which minimizes ``threshold ||X||_* + 0.5 ||X||_F^2`` instead and carries a
    small bias for finite ``threshold``. Its defaults follow common practice:
    ``threshold = 5 sqrt(N1 N2)`` and ``step = 1.2 N1 N2 / m`` capped at
    ``MAX_DEFAULT_STEP`` (the recursion only converges for steps below 2).
    """

    method: str = "admm"
    threshold: float | None = None
    step: float | None = None
    penalty: float | None = None
    max_iters: int = 1000
    rel_stop_tol: float = 1e-4
    svd_rank_cap: int | None = None

    def resolved(self, shape: tuple[int, int], m: int) -> SolverParams:
        n1, n2 = shape
        p = replace(
            self,
            threshold=5 * math.sqrt(n1 * n2) if self.threshold is None else self.threshold,
            step=min(1.2 * n1 * n2 / m, MAX_DEFAULT_STEP) if self.step is None else self.step,
            svd_rank_cap=min(n1, n2) if self.svd_rank_cap is None else self.svd_rank_cap,
        )
        if p.method not in ("admm", "svt"):
            raise InvalidParameterError(f"unknown method {p.method!r}")
        if p.threshold <= 0 or p.step <= 0 or p.max_iters < 1 or p.rel_stop_tol <= 0 or p.svd_rank_cap < 1:
            raise InvalidParameterError(f"solver parameters must be positive: {p}")
        if p.penalty is not None and p.penalty <= 0:
            raise InvalidParameterError("penalty must be positive")
        return p


@dataclass
class CompletionResult:
    estimate: np.ndarray
    iterations: int
    converged: bool
    residual_history: list[float] = field(default_factory=list)


def _shrink(Y: np.ndarray, tau: float, cap: int) -> tuple[np.ndarray, int]:
    U, s, Vh = np.linalg.svd(Y, full_matrices=False)
    s = np.maximum(s[:cap] - tau, 0.0)
    r = int(np.count_nonzero(s))
    return (U[:, :r] * s[:r]) @ Vh[:r], r


def svt_complete(obs: PartialObservation, params: SolverParams = SolverParams()) -> CompletionResult:
    """Minimize ``||X||_*`` subject to ``X = Y`` on the observed entries.

    Convergence is declared once ``||P(X - Y)||_F / ||P(Y)||_F <= rel_stop_tol``
    (for ADMM, the full splitting residual must also meet the tolerance).
    A run whose residual stays above ten times its first value for 50
    consecutive iterations is abandoned and returned with ``converged=False``.
    """
    mask = obs.mask
    if mask.m == 0:
        raise InvalidParameterError("mask is empty")
    p = params.resolved(mask.shape, mask.m)
    if float(np.linalg.norm(obs.values)) == 0:
        return CompletionResult(np.zeros(mask.shape, dtype=complex), 0, True, [0.0])
    if p.method == "svt":
        return _svt(obs, p)
    return _admm(obs, p)


def _svt(obs: PartialObservation, p: SolverParams) -> CompletionResult:
    rows, cols = obs.mask.rows, obs.mask.cols
    b = obs.values
    bnorm = float(np.linalg.norm(b))
    # kicked start: the first shrinkage already keeps a nonzero singular value
    opnorm = float(np.linalg.norm(obs.dense(), 2))
    k0 = max(1, math.ceil(p.threshold / (p.step * opnorm)))
    Y = np.zeros(obs.shape, dtype=complex)
    Y[rows, cols] = k0 * p.step * b
    history: list[float] = []
    bad, converged, it = 0, False, 0
    for it in range(1, p.max_iters + 1):
        X, _ = _shrink(Y, p.threshold, p.svd_rank_cap)
        resid = b - X[rows, cols]
        rel = float(np.linalg.norm(resid)) / bnorm
        history.append(rel)
        if rel <= p.rel_stop_tol:
            converged = True
            break
        bad = bad + 1 if rel > DIVERGENCE_FACTOR * history[0] else 0
        if bad >= DIVERGENCE_PATIENCE or not math.isfinite(rel):
            break
        Y[rows, cols] += p.step * resid
    return CompletionResult(X, it, converged, history)


def _admm(obs: PartialObservation, p: SolverParams) -> CompletionResult:
    # splitting X = W with W pinned to the data on the mask
    rows, cols = obs.mask.rows, obs.mask.cols
    b = obs.values
    bnorm = float(np.linalg.norm(b))
    rho = p.penalty if p.penalty is not None else math.sqrt(obs.mask.m) / bnorm
    W = obs.dense()
    L = np.zeros_like(W)
    X = W
    history: list[float] = []
    bad, converged, it = 0, False, 0
    for it in range(1, p.max_iters + 1):
        X, _ = _shrink(W - L / rho, 1.0 / rho, p.svd_rank_cap)
        W_new = X + L / rho
        W_new[rows, cols] = b
        L += rho * (X - W_new)
        primal = float(np.linalg.norm(X - W_new)) / bnorm
        dual = float(np.linalg.norm(W_new - W)) / bnorm
        W = W_new
        rel = float(np.linalg.norm(b - X[rows, cols])) / bnorm
        history.append(rel)
        if max(primal, dual) <= p.rel_stop_tol:
            converged = True
            break
        bad = bad + 1 if rel > DIVERGENCE_FACTOR * history[0] else 0
        if bad >= DIVERGENCE_PATIENCE or not math.isfinite(rel):
            break
        if primal > 10 * dual:
            rho *= 2
        elif dual > 10 * primal:
            rho /= 2
    return CompletionResult(X, it, converged, history)


def trailing_median_nonincreasing(history, window: int = MONOTONE_WINDOW) -> bool:
    """Medians of consecutive non-overlapping windows never increase."""
    h = np.asarray(history, dtype=float)
    n = h.size // window
    if n < 2:
        return True
    med = np.median(h[h.size - n * window:].reshape(n, window), axis=1)
    return bool(np.all(np.diff(med) <= 0))


def _soft_impute(obs: PartialObservation, lam: float, X0: np.ndarray, cap: int,
                 tol: float, max_iters: int) -> tuple[np.ndarray, int]:
    """Proximal gradient on ``0.5 ||P(X - Y)||_F^2 + lam ||X||_*`` (unit step)."""
    rows, cols = obs.mask.rows, obs.mask.cols
    X = X0
    it = 0
    for it in range(1, max_iters + 1):
        Z = X.copy()
        Z[rows, cols] = obs.values
        Xn, _ = _shrink(Z, lam, cap)
        change = np.linalg.norm(Xn - X)
        X = Xn
        if change <= tol * max(1.0, np.linalg.norm(X)):
            break
    return X, it


def noisy_complete(obs: PartialObservation, delta: float,
                   params: SolverParams = SolverParams()) -> CompletionResult:
    """Minimize ``||X||_*`` subject to ``||P(X - Y)||_F <= delta``.

    Solves the penalized problem ``0.5 ||P(X - Y)||^2 + lam ||X||_*`` along a
    geometric path of decreasing ``lam``, warm-started, then bisects ``lam``
    between the last two path points so the data-fit residual lands in
    ``[delta (1 - rel_stop_tol), delta]``. ``delta = 0`` defers to
    :func:`svt_complete`.
    """
    if delta < 0:
        raise InvalidParameterError("delta must be nonnegative")
    if delta == 0:
        return svt_complete(obs, params)
    mask = obs.mask
    if mask.m == 0:
        raise InvalidParameterError("mask is empty")
    p = params.resolved(mask.shape, mask.m)
    rows, cols = mask.rows, mask.cols
    ynorm = float(np.linalg.norm(obs.values))
    X = np.zeros(mask.shape, dtype=complex)
    if delta >= ynorm:
        return CompletionResult(X, 0, True, [ynorm])

    def fit(X):
        return float(np.linalg.norm(obs.values - X[rows, cols]))

    inner_tol = 1e-10
    inner_iters = max(50, p.max_iters)
    lam_hi = float(np.linalg.norm(obs.dense(), 2))  # X = 0 is optimal here
    history = [ynorm]
    total = 0
    lam, X_hi = lam_hi, X
    lam_lo = X_lo = None
    while lam > 1e-12 * lam_hi:
        lam *= 0.5
        X_new, it = _soft_impute(obs, lam, X_hi, p.svd_rank_cap, inner_tol, inner_iters)
        total += it
        r = fit(X_new)
        history.append(r)
        if r <= delta:
            lam_lo, X_lo = lam, X_new
            break
        lam_hi, X_hi = lam, X_new
    if lam_lo is None:
        return CompletionResult(X_hi, total, False, history)
    # bisect in log(lam): residual grows with lam
    for _ in range(60):
        if fit(X_lo) >= delta * (1 - p.rel_stop_tol):
            break
        lam = math.sqrt(lam_lo * lam_hi)
        X_mid, it = _soft_impute(obs, lam, X_lo, p.svd_rank_cap, inner_tol, inner_iters)
        total += it
        r = fit(X_mid)
        history.append(r)
        if r <= delta:
            lam_lo, X_lo = lam, X_mid
        else:
            lam_hi, X_hi = lam, X_mid
    return CompletionResult(X_lo, total, True, history)


def stability_bound(N1: int, N2: int, m: int, delta: float) -> float:
    """``4 sqrt((2 N1 N2 + m) min(N1, N2) / m) delta + 2 delta``."""
    if m < 1:
        raise InvalidParameterError("m must be at least 1")
    if delta < 0:
        raise InvalidParameterError("delta must be nonnegative")
    return 4 * math.sqrt((2 * N1 * N2 + m) * min(N1, N2) / m) * delta + 2 * delta


@dataclass(frozen=True)
class RecoveryError:
    abs_frob: float
    rel_frob: float
    max_entry: float


def recovery_error(truth: np.ndarray, estimate: np.ndarray) -> RecoveryError:
    if truth.shape != estimate.shape:
        raise InvalidParameterError(f"shape mismatch: {truth.shape} vs {estimate.shape}")
    diff = truth - estimate
    a = float(np.linalg.norm(diff))
    t = float(np.linalg.norm(truth))
    rel = a / t if t > 0 else (0.0 if a == 0 else math.inf)
    return RecoveryError(a, rel, float(np.max(np.abs(diff))) if diff.size else 0.0)
