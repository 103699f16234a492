"""Subspace coherence, strong coherence, joint incoherence and numerical rank."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError
from .geometry import TargetScene

ORTHONORMAL_TOL = 1e-8


@dataclass(frozen=True)
class SvdFactors:
    """Compact SVD ``M = U diag(s) V^H`` truncated to the numerical rank."""

    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray
    tol: float

    @property
    def rank(self) -> int:
        return self.singular_values.size

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]


@dataclass(frozen=True)
class CoherenceReport:
    rank: int
    mu_u: float
    mu_v: float
    mu_s_u: float
    mu_s_v: float
    mu1: float
    tol: float

    @property
    def mu0(self) -> float:
        return max(self.mu_u, self.mu_v)

    def as_dict(self) -> dict:
        return asdict(self)


def default_rank_tol(shape: tuple[int, int]) -> float:
    return max(shape) * np.finfo(float).eps


def compact_svd(M: np.ndarray, rel_tol: float | None = None) -> SvdFactors:
    """Compact SVD keeping singular values strictly above ``rel_tol * s_max``.

    ``rel_tol`` defaults to ``max(N1, N2) * 2**-52``.
    """
    M = np.asarray(M)
    if M.ndim != 2:
        raise InvalidParameterError(f"expected a matrix, got shape {M.shape}")
    if rel_tol is None:
        rel_tol = default_rank_tol(M.shape)
    if rel_tol <= 0:
        raise InvalidParameterError("rel_tol must be positive")
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0 or not np.isfinite(s[0]):
        raise DegenerateInputError("matrix is zero (or non-finite); no column space")
    r = int(np.count_nonzero(s > rel_tol * s[0]))
    return SvdFactors(U[:, :r], s[:r], Vh[:r].conj().T, float(rel_tol))


def _check_orthonormal(B: np.ndarray) -> np.ndarray:
    B = np.asarray(B)
    if B.ndim == 1:
        B = B[:, None]
    r = B.shape[1]
    if r < 1 or r > B.shape[0]:
        raise InvalidParameterError(f"basis shape {B.shape} is not N x r with 1 <= r <= N")
    gram = B.conj().T @ B
    if np.max(np.abs(gram - np.eye(r))) > ORTHONORMAL_TOL:
        raise InvalidParameterError("basis columns are not orthonormal")
    return B


def subspace_coherence(B: np.ndarray) -> float:
    """``(N/r) * max_i ||B[i, :]||^2`` for an orthonormal basis ``B`` (N x r)."""
    B = _check_orthonormal(B)
    n, r = B.shape
    return float(n / r * np.max(np.sum(np.abs(B) ** 2, axis=1)))


def strong_coherence(B: np.ndarray, block: int = 512) -> float:
    """``max_{i,j} |(N/r) P[i, j] - [i == j]|`` with ``P = B B^H``.

    The projector is formed one row block at a time.
    """
    B = _check_orthonormal(B)
    n, r = B.shape
    scale = n / r
    Bh = B.conj().T
    best = 0.0
    for start in range(0, n, block):
        rows = scale * (B[start:start + block] @ Bh)
        idx = np.arange(rows.shape[0])
        rows[idx, start + idx] -= 1.0
        best = max(best, float(np.max(np.abs(rows))))
    return best


def mu1_parameter(f: SvdFactors) -> float:
    """Smallest ``mu1`` with ``max|U V^H| <= mu1 * sqrt(r / (N1 N2))``."""
    n1, n2 = f.shape
    e = f.U @ f.V.conj().T
    return float(np.sqrt(n1 * n2 / f.rank) * np.max(np.abs(e)))


def coherence_report(M: np.ndarray, rel_tol: float | None = None) -> CoherenceReport:
    f = compact_svd(M, rel_tol)
    return CoherenceReport(
        rank=f.rank,
        mu_u=subspace_coherence(f.U),
        mu_v=subspace_coherence(f.V),
        mu_s_u=strong_coherence(f.U),
        mu_s_v=strong_coherence(f.V),
        mu1=mu1_parameter(f),
        tol=f.tol,
    )


def qr_coherence(X: np.ndarray) -> float:
    """Coherence of the column span of a full-column-rank ``X`` via thin QR.

    Independent route to the column-space coherence of ``X D Y^T`` when ``D``
    is nonsingular and ``Y`` has full column rank.
    """
    Q, _ = np.linalg.qr(X, mode="reduced")
    n, k = X.shape
    return float(n / k * np.max(np.sum(np.abs(Q) ** 2, axis=1)))


def dedup_angles(scene: TargetScene, eps: float = 0.0) -> TargetScene:
    """Keep the first occurrence of each angle cluster.

    An angle is dropped when it lies within ``eps`` of an angle already kept;
    ``eps = 0`` removes exact duplicates only.
    """
    if eps < 0:
        raise InvalidParameterError("eps must be nonnegative")
    kept: list[int] = []
    for i, a in enumerate(scene.angles):
        if all(abs(a - scene.angles[j]) > eps for j in kept):
            kept.append(i)
    if len(kept) == scene.num_targets:
        return scene
    return scene.subset(kept)
