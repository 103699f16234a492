"""Array topologies and target scenes.

Positions are in meters, angles in radians. Antennas are indexed from 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError, InvalidSceneError


class ArrayKind(str, Enum):
    ULA = "ULA"
    UCA = "UCA"
    SPIRAL = "SPIRAL"
    CUSTOM = "CUSTOM"


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """Planar antenna array.

    Attributes:
        positions: ``(M, 2)`` array of antenna coordinates in meters.
        wavelength: carrier wavelength in meters.
        kind: topology tag.
        spacing: inter-element spacing for ULAs, ``None`` otherwise.
    """

    positions: np.ndarray
    wavelength: float
    kind: ArrayKind = ArrayKind.CUSTOM
    spacing: float | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, copy=True)
        if pos.ndim == 1 and pos.size == 2:
            pos = pos.reshape(1, 2)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise InvalidParameterError(
                f"positions must be a nonempty (M, 2) array, got shape {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise InvalidParameterError("positions must be finite")
        if not (math.isfinite(self.wavelength) and self.wavelength > 0):
            raise InvalidParameterError(f"wavelength must be > 0, got {self.wavelength}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "kind", ArrayKind(self.kind))

    @property
    def num_antennas(self) -> int:
        return self.positions.shape[0]

    def __len__(self):
        return self.num_antennas

    def __eq__(self, other):
        if not isinstance(other, ArrayGeometry):
            return NotImplemented
        return (self.kind == other.kind and self.wavelength == other.wavelength
                and self.spacing == other.spacing
                and np.array_equal(self.positions, other.positions))

    __hash__ = None


def _check_positive(name: str, value: float):
    if not (math.isfinite(value) and value > 0):
        raise InvalidParameterError(f"{name} must be a positive real, got {value}")


def _check_count(num_antennas: int):
    if int(num_antennas) != num_antennas or num_antennas < 1:
        raise InvalidParameterError(f"num_antennas must be a positive integer, got {num_antennas}")


def make_ula(num_antennas: int, spacing: float, wavelength: float) -> ArrayGeometry:
    """Uniform linear array along the y axis: antenna ``l`` sits at ``(0, l*spacing)``."""
    _check_count(num_antennas)
    _check_positive("spacing", spacing)
    _check_positive("wavelength", wavelength)
    y = np.arange(num_antennas) * spacing
    pos = np.column_stack([np.zeros(num_antennas), y])
    return ArrayGeometry(pos, wavelength, ArrayKind.ULA, spacing=float(spacing))


def make_uca(num_antennas: int, radius: float, wavelength: float) -> ArrayGeometry:
    """Uniform circular array of the given radius centred at the origin.

    Antenna ``l`` (0-based) sits at angle ``2*pi*l/M``; this is the usual
    1-based ``2*pi*(l-1)/M`` formula shifted to 0-based indices.
    """
    _check_count(num_antennas)
    _check_positive("radius", radius)
    _check_positive("wavelength", wavelength)
    ang = 2 * np.pi * np.arange(num_antennas) / num_antennas
    pos = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    return ArrayGeometry(pos, wavelength, ArrayKind.UCA)


def make_spiral(num_antennas: int, turn_spacing: float, wavelength: float,
                angle_step: float = 2 * np.pi / 5) -> ArrayGeometry:
    """Archimedean spiral ``r = a*phi`` sampled at ``phi_l = l*angle_step``.

    Experimental: the sampling rule (uniform in the spiral parameter, not in
    arc length) is a convention, not an optimized design.
    """
    _check_count(num_antennas)
    _check_positive("turn_spacing", turn_spacing)
    _check_positive("wavelength", wavelength)
    _check_positive("angle_step", angle_step)
    phi = np.arange(num_antennas) * angle_step
    pos = (turn_spacing * phi)[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
    return ArrayGeometry(pos, wavelength, ArrayKind.SPIRAL)


def make_custom(positions, wavelength: float) -> ArrayGeometry:
    return ArrayGeometry(np.asarray(positions, dtype=float), wavelength, ArrayKind.CUSTOM)


def normalized_positions(geom: ArrayGeometry) -> np.ndarray:
    """Antenna coordinates in units of wavelength, shape ``(M, 2)``."""
    return geom.positions / geom.wavelength


@dataclass(frozen=True, eq=False)
class TargetScene:
    """Far-field point targets observed at a single pulse.

    Attributes:
        angles: ``K`` target angles in radians.
        reflections: ``K`` nonzero complex reflection coefficients.
        speeds: ``K`` radial speeds in m/s.
        pulse_index: 1-based pulse index ``q``.
        pulse_repetition: pulse repetition interval in seconds.
    """

    angles: np.ndarray
    reflections: np.ndarray = None
    speeds: np.ndarray = None
    pulse_index: int = 1
    pulse_repetition: float = 1e-3

    def __post_init__(self):
        angles = np.atleast_1d(np.array(self.angles, dtype=float))
        k = angles.size
        if angles.ndim != 1 or k < 1:
            raise InvalidSceneError("a scene needs at least one target angle")
        refl = (np.ones(k, dtype=complex) if self.reflections is None
                else np.atleast_1d(np.array(self.reflections, dtype=complex)))
        speeds = (np.zeros(k) if self.speeds is None
                  else np.atleast_1d(np.array(self.speeds, dtype=float)))
        if refl.shape != (k,) or speeds.shape != (k,):
            raise InvalidSceneError(
                f"angles, reflections and speeds must share length {k}, "
                f"got {refl.shape} and {speeds.shape}")
        if not (np.all(np.isfinite(angles)) and np.all(np.isfinite(refl))
                and np.all(np.isfinite(speeds))):
            raise InvalidSceneError("scene values must be finite")
        if np.any(refl == 0):
            raise InvalidSceneError("reflection coefficients must be nonzero")
        if int(self.pulse_index) != self.pulse_index or self.pulse_index < 1:
            raise InvalidSceneError(f"pulse_index must be a positive integer, got {self.pulse_index}")
        if not (math.isfinite(self.pulse_repetition) and self.pulse_repetition > 0):
            raise InvalidSceneError(f"pulse_repetition must be > 0, got {self.pulse_repetition}")
        for name, arr in (("angles", angles), ("reflections", refl), ("speeds", speeds)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "pulse_index", int(self.pulse_index))

    @property
    def num_targets(self) -> int:
        return self.angles.size

    def subset(self, idx: Sequence[int]) -> TargetScene:
        idx = np.asarray(idx, dtype=int)
        return TargetScene(self.angles[idx], self.reflections[idx], self.speeds[idx],
                           self.pulse_index, self.pulse_repetition)

    def scaled(self, c: complex) -> TargetScene:
        """Same scene with every reflection coefficient multiplied by ``c``."""
        return TargetScene(self.angles, self.reflections * c, self.speeds,
                           self.pulse_index, self.pulse_repetition)
