"""Trace-based brackets on the extreme eigenvalues of a Hermitian matrix."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class EigenBracket:
    tau: float
    s: float
    lambda_min_lo: float
    lambda_min_hi: float
    lambda_max_lo: float
    lambda_max_hi: float


def wolkowicz_brackets(M: np.ndarray, herm_tol: float = 1e-10) -> EigenBracket:
    """Wolkowicz-Styan brackets from ``tr(M)`` and ``tr(M^2)``.

    With ``tau = tr(M)/N`` and ``s^2 = tr(M^2)/N - tau^2``::

        tau - s sqrt(N-1) <= lambda_min <= tau - s / sqrt(N-1)
        tau + s / sqrt(N-1) <= lambda_max <= tau + s sqrt(N-1)

    All brackets collapse to ``tau`` when ``N == 1``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise InvalidParameterError(f"expected a nonempty square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M))))
    if np.max(np.abs(M - M.conj().T)) > herm_tol * scale:
        raise InvalidParameterError("matrix is not Hermitian")
    n = M.shape[0]
    tau = float(np.real(np.trace(M))) / n
    if n == 1:
        return EigenBracket(tau, 0.0, tau, tau, tau, tau)
    s2 = float(np.sum(np.abs(M) ** 2)) / n - tau**2
    s = math.sqrt(max(s2, 0.0))
    root = math.sqrt(n - 1)
    return EigenBracket(tau, s, tau - s * root, tau - s / root, tau + s / root, tau + s * root)
