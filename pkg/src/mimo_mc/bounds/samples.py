"""Sample-count thresholds for exact nuclear-norm completion.

The numerical constants in these estimates are not known; the defaults
``C = C1 = C2 = 1`` and ``beta = 3`` are placeholders, so the outputs are
only meaningful up to a constant factor.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class SampleConstants:
    C: float = 1.0
    C1: float = 1.0
    C2: float = 1.0
    beta: float = 3.0


@dataclass(frozen=True)
class SampleThresholds:
    incoherent_general: float
    incoherent_low_rank: float
    low_rank_eligible: bool
    strong_quartic: float
    strong_polylog: float
    smallest: str

    def as_dict(self) -> dict:
        return asdict(self)


def sample_requirement(N: int, r: int, mu0: float, mu1: float, mu_strong: float,
                       constants: SampleConstants = SampleConstants()) -> SampleThresholds:
    """Evaluate the sample-count estimates for an ``N = max(N1, N2)``, rank-``r`` matrix.

    * ``incoherent_general``: ``C max(mu1^2, sqrt(mu0) mu1, mu0 N^(1/4)) N r beta log N``
    * ``incoherent_low_rank``: ``C mu0 N^(6/5) r beta log N``, usable when ``r <= N^(1/5)/mu0``
    * ``strong_quartic``: ``C1 mu^4 N r^2 log^2 N``
    * ``strong_polylog``: ``C2 mu^2 N r log^6 N``

    ``smallest`` names the least demanding applicable estimate.
    """
    if N < 1 or r < 1 or min(mu0, mu1, mu_strong) <= 0:
        raise InvalidParameterError("N, r and coherence parameters must be positive")
    c = constants
    lg = math.log(N)
    general = c.C * max(mu1**2, math.sqrt(mu0) * mu1, mu0 * N**0.25) * N * r * c.beta * lg
    low_rank = c.C * mu0 * N**1.2 * r * c.beta * lg
    eligible = r <= N**0.2 / mu0
    quartic = c.C1 * mu_strong**4 * N * r**2 * lg**2
    polylog = c.C2 * mu_strong**2 * N * r * lg**6
    options = {"incoherent_general": general, "strong_quartic": quartic, "strong_polylog": polylog}
    if eligible:
        options["incoherent_low_rank"] = low_rank
    smallest = min(options, key=options.get)
    return SampleThresholds(general, low_rank, eligible, quartic, polylog, smallest)


def ula_sample_estimate(M: int, K: int, constants: SampleConstants = SampleConstants()) -> tuple[float, float]:
    """``(C1 K^4 M log^2 M, C2 K^2 M log^6 M)`` for ULA pairs with ``M = max(M_t, M_r)``."""
    if M < 1 or K < 1:
        raise InvalidParameterError("M and K must be positive")
    lg = math.log(M)
    return constants.C1 * K**4 * M * lg**2, constants.C2 * K**2 * M * lg**6
