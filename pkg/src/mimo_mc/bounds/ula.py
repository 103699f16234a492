"""Coherence bounds for ULA transmitter/receiver pairs."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from ..errors import InvalidParameterError
from ..geometry import ArrayGeometry, ArrayKind, TargetScene
from .kernel import beta_sup_finite, beta_sup_uniform, min_separation_xi


@dataclass(frozen=True)
class UlaBoundReport:
    """Bounds on ``mu0``/``mu1`` for a ULA pair.

    ``mu0_bound`` and ``mu1_bound`` are ``None`` when ``K`` exceeds
    ``k_max``. A side whose denominator ``M - (K-1) sqrt(beta)`` is not
    positive contributes ``inf``.
    """

    K: int
    M_t: int
    M_r: int
    xi_t: float | None
    xi_r: float | None
    xi: float | None
    beta_t: float
    beta_r: float
    beta_uniform: float | None
    k_max: float
    feasible: bool
    mu0_bound: float | None
    mu1_bound: float | None

    def as_dict(self) -> dict:
        return asdict(self)


def side_bound(M: int, K: int, beta: float) -> float:
    """``M / (M - (K-1) sqrt(beta))``, or ``inf`` when the denominator is not positive."""
    if K == 1:
        return 1.0
    den = M - (K - 1) * math.sqrt(beta)
    return M / den if den > 0 else math.inf


def k_max(Ms, betas) -> float:
    return max(M / math.sqrt(b) if b > 0 else math.inf for M, b in zip(Ms, betas))


def _side_beta(M: int, xi: float | None) -> float:
    if xi is None:
        return 0.0
    if xi <= 0:
        return float(M) ** 2  # pair of coincident generators: kernel peak
    return beta_sup_finite(M, xi)


def ula_bounds(M_t: int, M_r: int, K: int, xi_t: float | None, xi_r: float | None,
               uniform: bool = False, beta_scale: float = 1.0) -> UlaBoundReport:
    """Coherence bounds for ULAs with ``M_t``/``M_r`` antennas and ``K`` targets.

    ``xi_t``/``xi_r`` are the wrapped separations of the transmit/receive
    generators (ignored for ``K = 1``). With ``uniform=True`` the
    ``M``-independent supremum ``1/sin^2(pi xi)`` replaces both per-array
    suprema. ``beta_scale`` multiplies every supremum and exists only for
    mutation testing.
    """
    if K < 1 or int(K) != K:
        raise InvalidParameterError(f"K must be a positive integer, got {K}")
    for name, xi in (("xi_t", xi_t), ("xi_r", xi_r)):
        if K > 1 and (xi is None or not 0 <= xi <= 0.5):
            raise InvalidParameterError(f"{name} must lie in [0, 1/2] for K > 1, got {xi}")
    if K == 1:
        return UlaBoundReport(1, M_t, M_r, None, None, None, 0.0, 0.0, None,
                              math.inf, True, 1.0, 1.0)
    xi = min(xi_t, xi_r)
    beta_u = beta_sup_uniform(xi) if xi > 0 else None
    if uniform:
        if beta_u is None:
            raise InvalidParameterError("uniform bound needs xi > 0")
        beta_t = beta_r = beta_u
    else:
        beta_t, beta_r = _side_beta(M_t, xi_t), _side_beta(M_r, xi_r)
    beta_t *= beta_scale
    beta_r *= beta_scale
    kmax = k_max((M_t, M_r), (beta_t, beta_r))
    feasible = K <= kmax
    mu0 = mu1 = None
    if feasible:
        mu0 = max(side_bound(M_t, K, beta_t), side_bound(M_r, K, beta_r))
        mu1 = mu0 * math.sqrt(K)
    return UlaBoundReport(K, M_t, M_r, xi_t, xi_r, xi, beta_t, beta_r, beta_u,
                          kmax, feasible, mu0, mu1)


def ula_bounds_for_scene(tx: ArrayGeometry, rx: ArrayGeometry, scene: TargetScene,
                         **kwargs) -> UlaBoundReport:
    """:func:`ula_bounds` with separations computed from the scene angles."""
    for g in (tx, rx):
        if g.kind != ArrayKind.ULA or g.spacing is None:
            raise InvalidParameterError("ula_bounds_for_scene needs ULA geometries")
    K = scene.num_targets
    if K == 1:
        return ula_bounds(tx.num_antennas, rx.num_antennas, 1, None, None, **kwargs)
    xi_t = min_separation_xi(tx.spacing / tx.wavelength, scene.angles)
    xi_r = min_separation_xi(rx.spacing / rx.wavelength, scene.angles)
    return ula_bounds(tx.num_antennas, rx.num_antennas, K, xi_t, xi_r, **kwargs)
