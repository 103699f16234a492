"""Steering matrices, the colocated MIMO radar data matrix and sampled observations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError, InvalidSceneError
from .geometry import ArrayGeometry, TargetScene, normalized_positions
from .rng import MASK_STREAM, NOISE_STREAM, substream


def direction(theta) -> np.ndarray:
    """Unit direction vectors ``(cos theta, sin theta)``, shape ``(..., 2)``."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def steering_matrix(geom: ArrayGeometry, angles: Sequence[float]) -> np.ndarray:
    """Alternant steering matrix, ``(M, K)`` with entries ``exp(j 2 pi r_l . T(theta_k))``.

    For a ULA the phase is evaluated as ``l * (d/lambda) * sin(theta)`` so the
    result is exactly Vandermonde in the generators ``exp(j 2 pi (d/lambda) sin theta)``.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if angles.size < 1:
        raise InvalidParameterError("need at least one angle")
    if geom.spacing is not None and geom.kind == "ULA":
        l = np.arange(geom.num_antennas)[:, None]
        phase = l * (geom.spacing / geom.wavelength) * np.sin(angles)[None, :]
    else:
        phase = normalized_positions(geom) @ direction(angles).T
    return np.exp(2j * np.pi * phase)


def gain_matrix(scene: TargetScene, wavelength: float) -> np.ndarray:
    """Diagonal ``K x K`` matrix of reflection coefficients times Doppler phases."""
    if np.any(scene.reflections == 0):
        raise InvalidSceneError("reflection coefficients must be nonzero")
    if not wavelength > 0:
        raise InvalidParameterError(f"wavelength must be > 0, got {wavelength}")
    phase = (4 * np.pi / wavelength) * scene.speeds * (scene.pulse_index - 1) * scene.pulse_repetition
    return np.diag(scene.reflections * np.exp(1j * phase))


def data_matrix(tx: ArrayGeometry, rx: ArrayGeometry, scene: TargetScene) -> np.ndarray:
    """``X_r D X_t^T`` (plain transpose), shape ``(M_r, M_t)``."""
    if tx.wavelength != rx.wavelength:
        raise InvalidParameterError(
            f"tx and rx wavelengths differ: {tx.wavelength} vs {rx.wavelength}")
    xr = steering_matrix(rx, scene.angles)
    xt = steering_matrix(tx, scene.angles)
    d = np.diag(gain_matrix(scene, tx.wavelength))
    return (xr * d[None, :]) @ xt.T


@dataclass(frozen=True, eq=False)
class SampleMask:
    """Set of observed coordinates, stored as sorted row/col index arrays."""

    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).ravel()
        cols = np.asarray(self.cols, dtype=np.int64).ravel()
        n1, n2 = self.shape
        if rows.shape != cols.shape:
            raise InvalidParameterError("rows and cols must have equal length")
        if rows.size and (rows.min() < 0 or rows.max() >= n1 or cols.min() < 0 or cols.max() >= n2):
            raise InvalidParameterError("mask index out of range")
        flat = rows * n2 + cols
        order = np.argsort(flat, kind="stable")
        flat = flat[order]
        if flat.size > 1 and np.any(np.diff(flat) == 0):
            raise InvalidParameterError("mask indices must be distinct")
        rows, cols = rows[order], cols[order]
        rows.setflags(write=False)
        cols.setflags(write=False)
        object.__setattr__(self, "shape", (int(n1), int(n2)))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def m(self) -> int:
        return self.rows.size

    def as_bool(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=bool)
        out[self.rows, self.cols] = True
        return out

    @classmethod
    def from_bool(cls, mask: np.ndarray) -> SampleMask:
        r, c = np.nonzero(mask)
        return cls(mask.shape, r, c)

    def __eq__(self, other):
        if not isinstance(other, SampleMask):
            return NotImplemented
        return (self.shape == other.shape and np.array_equal(self.rows, other.rows)
                and np.array_equal(self.cols, other.cols))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PartialObservation:
    """Noisy entries ``Y(i, j)`` on a mask, with the realized noise norm ``delta``."""

    mask: SampleMask
    values: np.ndarray
    delta: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).ravel()
        if values.size != self.mask.m:
            raise InvalidParameterError(
                f"need one value per mask index ({self.mask.m}), got {values.size}")
        if self.delta < 0:
            raise InvalidParameterError("delta must be nonnegative")
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    def dense(self) -> np.ndarray:
        """Zero-filled matrix holding the observed values."""
        out = np.zeros(self.shape, dtype=complex)
        out[self.mask.rows, self.mask.cols] = self.values
        return out


def sample_uniform(shape: tuple[int, int], m: int, seed: int) -> SampleMask:
    """``m`` distinct coordinates drawn uniformly without replacement."""
    n1, n2 = shape
    total = n1 * n2
    if int(m) != m or not 1 <= m <= total:
        raise InvalidParameterError(f"m must be an integer in [1, {total}], got {m}")
    rng = substream(seed, MASK_STREAM)
    flat = rng.choice(total, size=int(m), replace=False)
    return SampleMask((n1, n2), flat // n2, flat % n2)


def observe(delta_matrix: np.ndarray, mask: SampleMask, noise_std: float,
            seed: int) -> PartialObservation:
    """Entries of ``delta_matrix + Z`` on ``mask``.

    ``Z`` is circularly-symmetric complex Gaussian with per-entry standard
    deviation ``noise_std`` (variance split evenly between real and imaginary
    parts). The returned ``delta`` is the exact Frobenius norm of the noise on
    the mask.
    """
    if delta_matrix.shape != mask.shape:
        raise InvalidParameterError(
            f"mask shape {mask.shape} does not match matrix shape {delta_matrix.shape}")
    if noise_std < 0:
        raise InvalidParameterError("noise_std must be nonnegative")
    clean = delta_matrix[mask.rows, mask.cols]
    if noise_std == 0:
        return PartialObservation(mask, clean.copy(), 0.0)
    rng = substream(seed, NOISE_STREAM)
    z = (noise_std / np.sqrt(2)) * (rng.standard_normal(mask.m) + 1j * rng.standard_normal(mask.m))
    return PartialObservation(mask, clean + z, float(np.linalg.norm(z)))
