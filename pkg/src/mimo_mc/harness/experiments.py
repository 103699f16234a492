"""Experiment drivers. Each returns a :class:`Table` that renders to CSV."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..bounds import (general_bounds, kernel_surface, lemma2_xi, sample_requirement,
                      separation_band, ula_bounds, ula_bounds_for_scene)
from ..coherence import coherence_report
from ..errors import InvalidParameterError
from ..formats import csv_text
from ..geometry import ArrayKind
from ..signal import PartialObservation, data_matrix, observe, sample_uniform
from ..solver import (CompletionResult, SolverParams, noisy_complete, recovery_error,
                      svt_complete)
from .config import ExperimentConfig

BOUND_SLACK = 1e-9


@dataclass
class Table:
    header: list[str]
    rows: list[list]
    extra: dict = field(default_factory=dict)
    violations: int = 0

    def to_csv(self, cfg: ExperimentConfig) -> str:
        return csv_text(self.header, self.rows, cfg.hash_payload(), cfg.seed, self.extra)

    def column(self, name: str) -> list:
        k = self.header.index(name)
        return [r[k] for r in self.rows]


def _spacing_ratio(cfg: ExperimentConfig) -> float:
    rx = cfg.rx.build(2)
    return rx.spacing / rx.wavelength if rx.spacing is not None else 0.5


def _num_targets(cfg: ExperimentConfig) -> int:
    if cfg.scene.random:
        return cfg.scene.num_targets
    return len(cfg.scene.angles_deg)


def solver_params(cfg: ExperimentConfig) -> SolverParams:
    s = cfg.solver
    return SolverParams(method=s.method, rel_stop_tol=s.rel_stop_tol, max_iters=s.max_iters)


def run_coherence_sweep(cfg: ExperimentConfig) -> Table:
    """Measured ``max(mu(U), mu(V))`` against the ULA ``mu0`` bound for each ``M`` in the sweep.

    Infeasible rows carry ``mu0_bound = nan`` and ``feasible = false``.
    ``Table.violations`` counts feasible rows whose measurement exceeds the bound.
    """
    scene = cfg.scene.build(cfg.seed, _spacing_ratio(cfg))
    rows, bad = [], 0
    for M in cfg.sweep:
        tx, rx = cfg.tx.build(int(M)), cfg.rx.build(int(M))
        rep = coherence_report(data_matrix(tx, rx, scene), cfg.rank_tol)
        b = ula_bounds_for_scene(tx, rx, scene)
        mu = max(rep.mu_u, rep.mu_v)
        bound = b.mu0_bound if b.feasible else math.nan
        if b.feasible and mu > bound + BOUND_SLACK:
            bad += 1
        rows.append([int(M), mu, bound, b.feasible])
    return Table(["M", "mu_measured", "mu0_bound", "feasible"], rows, violations=bad)


def run_eta_sweep(cfg: ExperimentConfig) -> Table:
    """``mu0`` bound from the angular-gap separation ``lemma2_xi(eta)`` for each (eta, M)."""
    K = _num_targets(cfg)
    rows = []
    for eta in cfg.etas:
        xi = lemma2_xi(float(eta))
        for M in cfg.sweep:
            b = ula_bounds(int(M), int(M), K, xi, xi)
            rows.append([float(eta), int(M), xi, b.mu0_bound if b.feasible else math.nan,
                         b.feasible])
    return Table(["eta", "M", "xi", "mu0_bound", "feasible"], rows)


def surface_step(resolution: float) -> float:
    """Largest step ``<= resolution`` that divides ``2 pi`` exactly."""
    return 2 * math.pi / math.ceil(2 * math.pi / resolution - 1e-9)


def run_surface(cfg: ExperimentConfig) -> Table:
    """Kernel surface of the transmit array on ``[-pi, pi]^2``."""
    geom = cfg.tx.build()
    step = surface_step(cfg.resolution or 2 * math.pi / 128)
    axis, values = kernel_surface(geom, step, -math.pi, math.pi)
    n = axis.size
    xs = np.repeat(axis, n)
    ys = np.tile(axis, n)
    rows = [[x, y, v] for x, y, v in zip(xs.tolist(), ys.tolist(), values.ravel().tolist())]
    return Table(["x", "y", "value"], rows, extra={"resolution": step})


def trial_seed(seed: int, trial: int, m: int) -> int:
    return int(np.random.SeedSequence([seed, trial, m]).generate_state(1)[0])


def _recovery_trial(args):
    cfg, m, trial = args
    scene = cfg.scene.build(cfg.seed, _spacing_ratio(cfg), trial)
    tx, rx = cfg.tx.build(), cfg.rx.build()
    truth = data_matrix(tx, rx, scene)
    mask = sample_uniform(truth.shape, int(m), trial_seed(cfg.seed, trial, int(m)))
    obs = observe(truth, mask, cfg.noise_std, trial_seed(cfg.seed, trial, int(m)))
    params = solver_params(cfg)
    res = noisy_complete(obs, obs.delta, params) if obs.delta > 0 else svt_complete(obs, params)
    return m, trial, recovery_error(truth, res.estimate).rel_frob


def run_recovery_phase(cfg: ExperimentConfig) -> Table:
    """Success counts for each ``m``; success means relative error ``<= success_tol``.

    Trial ``t`` uses the same scene for every ``m`` and its own mask and noise
    substreams, so results do not depend on ``workers``.
    """
    tasks = [(cfg, m, t) for m in cfg.sweep for t in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_recovery_trial, tasks, chunksize=4))
    else:
        results = [_recovery_trial(t) for t in tasks]
    errs: dict = {m: [0.0] * cfg.trials for m in cfg.sweep}
    for m, t, e in results:
        errs[m][t] = e
    rows = []
    for m in cfg.sweep:
        e = errs[m]
        rows.append([int(m), cfg.trials, sum(x <= cfg.success_tol for x in e),
                     math.fsum(e) / len(e)])
    return Table(["m", "trials", "successes", "mean_rel_err"], rows)


def bounds_record(cfg: ExperimentConfig) -> dict:
    """Measured coherence, bound report and sample-count estimates for the configured scene."""
    scene = cfg.scene.build(cfg.seed, _spacing_ratio(cfg))
    tx, rx = cfg.tx.build(), cfg.rx.build()
    rep = coherence_report(data_matrix(tx, rx, scene), cfg.rank_tol)
    out = {f"measured_{k}": v for k, v in rep.as_dict().items()}
    if tx.kind == ArrayKind.ULA and rx.kind == ArrayKind.ULA:
        b = ula_bounds_for_scene(tx, rx, scene).as_dict()
    else:
        b = general_bounds(tx, rx, scene.num_targets, separation_band(cfg.eta)).as_dict()
    out.update({f"bound_{k}": v for k, v in b.items()})
    N = max(tx.num_antennas, rx.num_antennas)
    th = sample_requirement(N, rep.rank, rep.mu0, rep.mu1, max(rep.mu0, rep.mu_s_u, rep.mu_s_v))
    out.update({f"samples_{k}": v for k, v in th.as_dict().items()})
    return out


def synthesize_observation(cfg: ExperimentConfig):
    """Truth matrix and a random partial observation of it for ``complete``."""
    scene = cfg.scene.build(cfg.seed, _spacing_ratio(cfg))
    truth = data_matrix(cfg.tx.build(), cfg.rx.build(), scene)
    m = cfg.samples if cfg.samples is not None else truth.size // 2
    if not 1 <= m <= truth.size:
        raise InvalidParameterError(f"samples must lie in [1, {truth.size}]")
    mask = sample_uniform(truth.shape, m, cfg.seed)
    return truth, observe(truth, mask, cfg.noise_std, cfg.seed)


def run_complete(cfg: ExperimentConfig, obs: PartialObservation) -> CompletionResult:
    params = solver_params(cfg)
    if obs.delta > 0:
        return noisy_complete(obs, obs.delta, params)
    return svt_complete(obs, params)
