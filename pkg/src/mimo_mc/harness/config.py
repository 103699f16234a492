"""Experiment configuration: dataclasses, JSON loading and ``key=value`` overrides."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from ..errors import InvalidParameterError
from ..geometry import (ArrayGeometry, ArrayKind, TargetScene, make_custom, make_spiral,
                        make_uca, make_ula)
from ..bounds.kernel import min_separation_xi
from ..formats import config_hash
from ..rng import SCENE_STREAM, substream

KINDS = ("coherence-sweep", "eta-sweep", "surface", "recovery-phase", "bounds", "complete",
         "acceptance")

# Default fixed scene: four well-separated targets (xi = 0.216 for d = lambda/2).
DEFAULT_ANGLES_DEG = [-40.0, -10.0, 15.0, 50.0]
DEFAULT_REFLECTIONS = [[1.0, 0.0], [0.0, 0.8], [-0.6, 0.0], [0.5, 0.5]]


class ConfigError(InvalidParameterError):
    """Malformed or inconsistent experiment configuration."""


@dataclass
class ArraySpec:
    """One antenna array. Lengths are in metres; ``spacing`` defaults to half a wavelength."""

    kind: str = "ULA"
    count: int = 16
    wavelength: float = 0.5
    spacing: float | None = None
    radius: float | None = None
    turn_spacing: float | None = None
    angle_step: float = 2 * math.pi / 5
    positions: list | None = None

    def build(self, count: int | None = None) -> ArrayGeometry:
        M = self.count if count is None else count
        kind = self.kind.upper()
        if kind == ArrayKind.ULA.value:
            d = self.wavelength / 2 if self.spacing is None else self.spacing
            return make_ula(M, d, self.wavelength)
        if kind == ArrayKind.UCA.value:
            return make_uca(M, 0.5 if self.radius is None else self.radius, self.wavelength)
        if kind == ArrayKind.SPIRAL.value:
            a = 0.08 if self.turn_spacing is None else self.turn_spacing
            return make_spiral(M, a, self.wavelength, self.angle_step)
        if kind == ArrayKind.CUSTOM.value:
            if self.positions is None:
                raise ConfigError("custom array needs positions")
            return make_custom(self.positions, self.wavelength)
        raise ConfigError(f"unknown array kind {self.kind!r}")


@dataclass
class SceneSpec:
    """Either a fixed scene (angles in degrees) or a random-scene distribution.

    Reflections are ``[re, im]`` pairs. Random scenes draw ``num_targets``
    angles uniformly on ``(-pi/2, pi/2)`` and resample until the wrapped
    separation of the receive array is at least ``xi_floor``; random
    reflections are unit-modulus with uniform phase.
    """

    angles_deg: list | None = field(default_factory=lambda: list(DEFAULT_ANGLES_DEG))
    reflections: list | None = field(default_factory=lambda: [list(r) for r in DEFAULT_REFLECTIONS])
    speeds: list | None = None
    pulse_index: int = 1
    pulse_repetition: float = 1e-3
    random: bool = False
    num_targets: int = 4
    xi_floor: float = 0.05

    def fixed(self) -> TargetScene:
        if self.angles_deg is None:
            raise ConfigError("fixed scene needs angles_deg")
        refl = None
        if self.reflections is not None:
            try:
                refl = [complex(re, im) for re, im in self.reflections]
            except (TypeError, ValueError) as exc:
                raise ConfigError("reflections must be [re, im] pairs") from exc
        return TargetScene(np.deg2rad(np.asarray(self.angles_deg, dtype=float)), refl,
                           self.speeds, self.pulse_index, self.pulse_repetition)

    def draw(self, rng: np.random.Generator, spacing_over_lambda: float = 0.5) -> TargetScene:
        return random_scene(rng, self.num_targets, spacing_over_lambda, self.xi_floor,
                            self.pulse_index, self.pulse_repetition)

    def build(self, seed: int, spacing_over_lambda: float = 0.5, *path: int) -> TargetScene:
        if not self.random:
            return self.fixed()
        return self.draw(substream(seed, SCENE_STREAM, *path), spacing_over_lambda)


def random_scene(rng: np.random.Generator, K: int, spacing_over_lambda: float = 0.5,
                 xi_floor: float = 0.05, pulse_index: int = 1,
                 pulse_repetition: float = 1e-3, max_tries: int = 100_000) -> TargetScene:
    """Uniform angles on ``(-pi/2, pi/2)`` resampled until separation ``>= xi_floor``."""
    if K < 1:
        raise ConfigError("num_targets must be positive")
    for _ in range(max_tries):
        angles = rng.uniform(-math.pi / 2, math.pi / 2, K)
        if K == 1 or min_separation_xi(spacing_over_lambda, angles) >= xi_floor:
            break
    else:
        raise ConfigError(f"could not draw {K} targets with xi >= {xi_floor}")
    refl = np.exp(2j * math.pi * rng.uniform(size=K))
    return TargetScene(angles, refl, None, pulse_index, pulse_repetition)


@dataclass
class SolverSpec:
    method: str = "admm"
    rel_stop_tol: float = 1e-4
    max_iters: int = 1000


@dataclass
class ExperimentConfig:
    """Everything an experiment needs.

    ``sweep`` holds antenna counts for the coherence and eta sweeps and sample
    counts ``m`` for the recovery phase. ``eta`` sets the admissible band
    ``|x - y| in [eta, pi]`` when ``bounds`` runs on non-ULA arrays, and
    ``samples`` is the observation count used by ``complete``.
    """

    kind: str = "coherence-sweep"
    tx: ArraySpec = field(default_factory=ArraySpec)
    rx: ArraySpec = field(default_factory=ArraySpec)
    scene: SceneSpec = field(default_factory=SceneSpec)
    sweep: list = field(default_factory=lambda: list(range(10, 101, 5)))
    etas: list = field(default_factory=lambda: [0.2, 0.5, 1.0, math.pi / 2])
    trials: int = 1
    seed: int = 0
    output: str | None = None
    resolution: float | None = None
    rank_tol: float | None = None
    samples: int | None = None
    eta: float = 1.0
    noise_std: float = 0.0
    success_tol: float = 1e-3
    workers: int = 1
    solver: SolverSpec = field(default_factory=SolverSpec)

    def validate(self) -> ExperimentConfig:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError("trials must be an integer >= 1")
        if any(b <= a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        if any(b <= a for a, b in zip(self.etas, self.etas[1:])):
            raise ConfigError("etas must be strictly increasing")
        if self.resolution is not None and not self.resolution > 0:
            raise ConfigError("resolution must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    def hash_payload(self) -> dict:
        d = self.to_dict()
        d.pop("output", None)
        d.pop("workers", None)  # parallelism never changes results
        return d

    def digest(self) -> str:
        return config_hash(self.hash_payload())


def _from_dict(cls, data: dict):
    if not isinstance(data, dict):
        raise ConfigError(f"expected an object for {cls.__name__}")
    known = {f.name: f for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"unknown key {key!r} in {cls.__name__}")
        sub = _NESTED.get((cls, key))
        kwargs[key] = _from_dict(sub, value) if sub is not None else value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


_NESTED = {
    (ExperimentConfig, "tx"): ArraySpec,
    (ExperimentConfig, "rx"): ArraySpec,
    (ExperimentConfig, "scene"): SceneSpec,
    (ExperimentConfig, "solver"): SolverSpec,
}


def default_config(kind: str = "coherence-sweep") -> ExperimentConfig:
    """Defaults for each experiment kind."""
    cfg = ExperimentConfig(kind=kind)
    if kind == "eta-sweep":
        cfg.sweep = list(range(10, 101, 10))
    elif kind == "surface":
        cfg.tx = ArraySpec(kind="UCA", count=20, radius=0.5)
        cfg.rx = ArraySpec(kind="UCA", count=20, radius=0.5)
        cfg.sweep = []
        cfg.resolution = 2 * math.pi / 128
    elif kind == "recovery-phase":
        cfg.tx = ArraySpec(count=64)
        cfg.rx = ArraySpec(count=64)
        cfg.scene = SceneSpec(angles_deg=None, reflections=None, random=True, num_targets=3,
                              xi_floor=0.1)
        cfg.sweep = [round(f * 64 * 64) for f in (0.1, 0.2, 0.25, 0.3, 0.4, 0.5)]
        cfg.trials = 50
    elif kind in ("bounds", "complete"):
        cfg.sweep = []
    return cfg.validate()


def _coerce(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(data: dict, overrides) -> dict:
    """Apply ``dotted.key=value`` strings to a nested dict; values are parsed as JSON when possible."""
    for item in overrides or ():
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        parts = key.strip().split(".")
        node = data
        for p in parts[:-1]:
            if not isinstance(node.get(p), dict):
                raise ConfigError(f"unknown config section {p!r} in {key!r}")
            node = node[p]
        if parts[-1] not in node:
            raise ConfigError(f"unknown config key {key!r}")
        node[parts[-1]] = _coerce(raw.strip())
    return data


def load_config(path: str | Path | None = None, kind: str | None = None,
                overrides=(), seed: int | None = None) -> ExperimentConfig:
    """Defaults for ``kind``, then the JSON file at ``path``, then overrides and seed."""
    file_data = {}
    if path is not None:
        try:
            file_data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(file_data, dict):
            raise ConfigError("config file must hold a JSON object")
    base_kind = kind or file_data.get("kind", "coherence-sweep")
    if base_kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {base_kind!r}")
    data = default_config(base_kind).to_dict()
    _merge(data, file_data)
    if kind is not None:
        data["kind"] = kind
    apply_overrides(data, overrides)
    if seed is not None:
        data["seed"] = seed
    cfg = _from_dict(ExperimentConfig, data)
    return cfg.validate()


def _merge(base: dict, extra: dict):
    for k, v in extra.items():
        if k not in base:
            raise ConfigError(f"unknown config key {k!r}")
        if isinstance(base[k], dict) and isinstance(v, dict):
            for kk in v:
                if kk not in base[k]:
                    raise ConfigError(f"unknown config key {k}.{kk}")
            base[k].update(v)
        else:
            base[k] = v
