"""Acceptance criteria as runnable checks.

Each ``criterion_NN`` returns a :class:`CriterionResult`; :func:`run_acceptance`
runs them all. Tolerances are the contract values and must not be relaxed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ..bounds import (beta_sup_finite, general_beta, kernel_surface, lemma2_set, lemma2_xi,
                      locate_general_sup, sample_requirement, ula_bounds, ula_sample_estimate,
                      wolkowicz_brackets, wrap_g)
from ..bounds.kernel import min_separation_xi
from ..bounds.samples import SampleConstants
from ..coherence import coherence_report, compact_svd, dedup_angles, subspace_coherence
from ..geometry import TargetScene, make_spiral, make_uca, make_ula
from ..rng import substream
from ..signal import data_matrix, observe, sample_uniform, steering_matrix
from ..solver import (SolverParams, noisy_complete, recovery_error, stability_bound,
                      svt_complete)
from .config import ExperimentConfig, default_config, random_scene
from .experiments import run_coherence_sweep, run_recovery_phase, trial_seed

# stream tags for acceptance draws, disjoint from the library's own
_S_SCENES, _S_DUP, _S_HERM, _S_LEMMA, _S_RANK1, _S_NOISY = 101, 102, 103, 104, 105, 106


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number, name):
    def deco(fn):
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)
        wrapper.__name__ = fn.__name__
        wrapper.__doc__ = fn.__doc__
        return wrapper
    return deco


@_timed(1, "K=1 coherence equals 1")
def criterion_01(seed: int = 0):
    """Single target: mu(U) = mu(V) = 1 for ULA, UCA and spiral arrays with M = 2..64."""
    t0 = time.perf_counter()
    worst = 0.0
    scene = TargetScene([0.3], [0.7 - 0.2j])
    for M in range(2, 65):
        for geom in (make_ula(M, 0.25, 0.5), make_uca(M, 0.5, 0.5), make_spiral(M, 0.08, 0.5)):
            f = compact_svd(data_matrix(geom, geom, scene))
            worst = max(worst, abs(subspace_coherence(f.U) - 1), abs(subspace_coherence(f.V) - 1))
    elapsed = time.perf_counter() - t0
    return worst <= 1e-10 and elapsed < 1.0, f"max |mu-1| = {worst:.2e}, {elapsed:.3f}s < 1s"


@dataclass(frozen=True)
class UlaInstance:
    M: int
    scene: TargetScene
    mu_u: float
    mu_v: float
    mu_s: float
    mu1: float
    rank: int


@lru_cache(maxsize=8)
def ula_instances(seed: int = 0, count: int = 500) -> tuple[UlaInstance, ...]:
    """Random ULA scenes (K 2..5, M 8..64, d = lambda/2) that are feasible at the true beta."""
    rng = substream(seed, _S_SCENES)
    out = []
    while len(out) < count:
        K = int(rng.integers(2, 6))
        M = int(rng.integers(8, 65))
        while True:
            angles = rng.uniform(-math.pi / 2, math.pi / 2, K)
            xi = min_separation_xi(0.5, angles)
            if xi > 0:
                break
        refl = rng.standard_normal(K) + 1j * rng.standard_normal(K)
        if not ula_bounds(M, M, K, xi, xi).feasible:
            continue
        scene = TargetScene(angles, refl)
        geom = make_ula(M, 0.25, 0.5)
        rep = coherence_report(data_matrix(geom, geom, scene))
        out.append(UlaInstance(M, scene, rep.mu_u, rep.mu_v, max(rep.mu_s_u, rep.mu_s_v),
                               rep.mu1, rep.rank))
    return tuple(out)


@_timed(2, "ULA bound validity")
def criterion_02(seed: int = 0, count: int = 500, beta_scale: float = 1.0):
    """Measured mu(U), mu(V), mu1 never exceed the ULA bounds on feasible random scenes."""
    t0 = time.perf_counter()
    insts = ula_instances(seed, count)
    bad = 0
    for inst in insts:
        xi = min_separation_xi(0.5, inst.scene.angles)
        b = ula_bounds(inst.M, inst.M, inst.scene.num_targets, xi, xi, beta_scale=beta_scale)
        if not b.feasible:
            continue
        if max(inst.mu_u, inst.mu_v) > b.mu0_bound + 1e-9 or inst.mu1 > b.mu1_bound + 1e-9:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 120
    return ok, f"{bad} violations in {len(insts)} feasible scenes, {elapsed:.1f}s < 120s"


@_timed(3, "asymptotic optimality")
def criterion_03(seed: int = 0):
    """K = 4 fixed scene: mu(U) at M = 200 near 1; bound curve nonincreasing beyond M = 20."""
    cfg = default_config("coherence-sweep")
    cfg.seed = seed
    cfg.sweep = list(range(20, 201))
    scene = cfg.scene.fixed()
    xi = min_separation_xi(0.5, scene.angles)
    table = run_coherence_sweep(cfg)
    mu, bound = table.column("mu_measured"), table.column("mu0_bound")
    rises = sum(b2 > b1 + 1e-6 for b1, b2 in zip(bound, bound[1:]))
    mu_rises = sum(m2 > m1 + 1e-6 for m1, m2 in zip(mu, mu[1:]))
    ok = (xi >= 0.1 and abs(mu[-1] - 1) <= 0.05 and rises == 0 and table.violations == 0
          and not any(math.isnan(b) for b in bound))
    return ok, (f"xi={xi:.3f}, mu(200)={mu[-1]:.4f}, bound increases={rises}, "
                f"bound violations={table.violations}, measured increases={mu_rises} (informational)")


def _lemma2_samples(rng, eta: float, n: int):
    """``n`` points of the band ``eta <= |y - x| <= pi - eta`` in ``[-pi/2, pi/2]^2``.

    A fifth lie on the two boundary lines (all of them when the band is a line),
    the rest are uniform in the interior by rejection.
    """
    h = math.pi / 2
    n_edge = n if eta >= h else n // 5
    d = np.where(rng.random(n_edge) < 0.5, eta, math.pi - eta)
    x = rng.uniform(-h, h - d)
    sgn = rng.random(n_edge) < 0.5
    xs, ys = np.where(sgn, x, x + d), np.where(sgn, x + d, x)
    parts_x, parts_y = [xs], [ys]
    need = n - n_edge
    while need > 0:
        a = rng.uniform(-h, h, (2, 4 * need))
        gap = np.abs(a[1] - a[0])
        keep = (gap >= eta) & (gap <= math.pi - eta)
        parts_x.append(a[0, keep][:need])
        parts_y.append(a[1, keep][:need])
        need -= int(min(keep.sum(), need))
    return np.concatenate(parts_x), np.concatenate(parts_y)


@_timed(4, "angular-gap separation closed form")
def criterion_04(seed: int = 0, samples: int = 100_000):
    """Monte Carlo minimum of the wrapped separation over the band set matches ``1 - cos(eta/2)``."""
    rng = substream(seed, _S_LEMMA)
    notes, ok = [], True
    for eta in (0.2, 0.5, 1.0, math.pi / 2):
        x, y = _lemma2_samples(rng, eta, samples)
        assert x.size == samples
        mc = float(np.min(wrap_g(0.5 * np.abs(np.sin(x) - np.sin(y)))))
        closed = lemma2_xi(eta)
        good = mc >= closed - 1e-9 and mc - closed <= 1e-3
        ok &= good
        notes.append(f"eta={eta:.3f}: mc-closed={mc - closed:.1e}")
    exact = abs(lemma2_xi(math.pi / 2) - (2 - math.sqrt(2)) / 2)
    ok &= exact <= 1e-12
    return ok, "; ".join(notes) + f"; |xi(pi/2)-(2-sqrt2)/2|={exact:.1e}"


@_timed(5, "coherence parameter chain")
def criterion_05(seed: int = 0, count: int = 500):
    """mu_s <= mu0 and mu1 <= mu0 sqrt(r) on the criterion-2 matrices."""
    bad = 0
    insts = ula_instances(seed, count)
    for inst in insts:
        mu0 = max(inst.mu_u, inst.mu_v)
        if inst.mu_s > mu0 + 1e-9 or inst.mu1 > mu0 * math.sqrt(inst.rank) + 1e-9:
            bad += 1
    return bad == 0, f"{bad} violations in {len(insts)} matrices"


@_timed(6, "duplicate-angle reduction")
def criterion_06(seed: int = 0, count: int = 100):
    """A duplicated angle leaves mu(U), mu(V) equal to those of the deduplicated matrix."""
    rng = substream(seed, _S_DUP)
    worst, rank_ok = 0.0, True
    for n in range(count):
        L = int(rng.integers(3, 6))
        M = int(rng.integers(8, 33))
        geom = (make_ula(M, 0.25, 0.5), make_uca(M, 0.5, 0.5), make_spiral(M, 0.08, 0.5))[n % 3]
        base = random_scene(rng, L, 0.5, 0.02)
        k = int(rng.integers(L))
        angles = np.insert(base.angles, int(rng.integers(L + 1)), base.angles[k])
        refl = rng.standard_normal(L + 1) + 1j * rng.standard_normal(L + 1)
        scene = TargetScene(angles, refl)
        full = coherence_report(data_matrix(geom, geom, scene))
        red = coherence_report(data_matrix(geom, geom, dedup_angles(scene)))
        rank_ok &= full.rank == red.rank == L
        worst = max(worst, abs(full.mu_u - red.mu_u), abs(full.mu_v - red.mu_v))
    return worst <= 1e-8 and rank_ok, f"max coherence gap {worst:.1e}, ranks consistent={rank_ok}"


@_timed(7, "trace eigenvalue brackets")
def criterion_07(seed: int = 0, count: int = 1000):
    """Eigenvalues of random Hermitian matrices lie in their trace brackets; tight equality case."""
    rng = substream(seed, _S_HERM)
    bad = 0
    for _ in range(count):
        N = int(rng.integers(1, 9))
        A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        H = (A + A.conj().T) / 2
        ev = np.linalg.eigvalsh(H)
        b = wolkowicz_brackets(H)
        tol = 1e-10 * max(1.0, float(np.max(np.abs(ev))))
        if not (b.lambda_min_lo - tol <= ev[0] <= b.lambda_min_hi + tol
                and b.lambda_max_lo - tol <= ev[-1] <= b.lambda_max_hi + tol):
            bad += 1
    gap = 0.0
    for N in range(2, 9):
        a, bb = float(rng.uniform(-3, 0)), float(rng.uniform(0.5, 3))
        br = wolkowicz_brackets(np.diag([a] + [bb] * (N - 1)))
        gap = max(gap, abs(br.lambda_min_lo - a))
    return bad == 0 and gap <= 1e-10, f"{bad} bracket misses in {count}; equality gap {gap:.1e}"


@_timed(8, "smallest Gram eigenvalue")
def criterion_08(seed: int = 0, count: int = 500):
    """lambda_min(X_t^H X_t) >= M - (K - 1) sqrt(beta) on the criterion-2 instances."""
    bad, worst = 0, math.inf
    insts = ula_instances(seed, count)
    for inst in insts:
        geom = make_ula(inst.M, 0.25, 0.5)
        X = steering_matrix(geom, inst.scene.angles)
        lam = float(np.linalg.eigvalsh(X.conj().T @ X)[0])
        xi = min_separation_xi(0.5, inst.scene.angles)
        floor = inst.M - (inst.scene.num_targets - 1) * math.sqrt(beta_sup_finite(inst.M, xi))
        worst = min(worst, lam - floor)
        bad += lam < floor - 1e-6
    return bad == 0, f"{bad} violations in {len(insts)}; min slack {worst:.3e}"


@_timed(9, "general-array kernel consistency")
def criterion_09(seed: int = 0):
    """ULA through the general-array search matches the 1-D supremum; UCA surface checks."""
    notes, ok = [], True
    for M, eta in ((8, 0.5), (8, 1.0), (8, math.pi / 2), (16, 1.0)):
        est = locate_general_sup(make_ula(M, 0.25, 0.5), lemma2_set(eta))
        ref = beta_sup_finite(M, lemma2_xi(eta))
        tol = est.refine_margin + 1e-9 * M * M
        good = abs(est.value - ref) <= tol
        ok &= good
        notes.append(f"M={M},eta={eta:.2f}: gap {abs(est.value - ref):.1e}<= {tol:.1e}")
    uca = make_uca(20, 0.5, 0.5)
    step = 2 * math.pi / 64
    axis, vals = kernel_surface(uca, step, -2 * math.pi, 2 * math.pi)
    diag = float(np.max(np.abs(np.diag(vals) - 400.0)))
    period = max(float(np.max(np.abs(vals[64:] - vals[:-64]))),
                 float(np.max(np.abs(vals[:, 64:] - vals[:, :-64]))))
    ok &= diag <= 1e-9 and period <= 1e-9
    notes.append(f"UCA diag err {diag:.1e}, period err {period:.1e}")
    return ok, "; ".join(notes)


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


def monotone_within_bands(successes, trials) -> tuple[bool, int]:
    """At most one drop between neighbours, and no drop outside 95% Wilson bands."""
    drops, significant = 0, 0
    for (k1, n1), (k2, n2) in zip(zip(successes, trials), zip(successes[1:], trials[1:])):
        if k2 / n2 < k1 / n1:
            drops += 1
            lo1, _ = wilson_interval(k1, n1)
            _, hi2 = wilson_interval(k2, n2)
            significant += hi2 < lo1
    return drops <= 1 and significant == 0, drops


@_timed(10, "noiseless completion")
def criterion_10(seed: int = 0, trials: int = 50, workers: int = 1):
    """Rank-1 8x8 recovery rate, exact full observation, and a monotone phase sweep."""
    t0 = time.perf_counter()
    tight = SolverParams(rel_stop_tol=1e-6, max_iters=5000)
    rng = substream(seed, _S_RANK1)
    wins = 0
    for s in range(50):
        u = np.exp(2j * math.pi * rng.uniform(size=8))
        v = np.exp(2j * math.pi * rng.uniform(size=8))
        truth = np.outer(u, v)
        obs = observe(truth, sample_uniform((8, 8), 38, trial_seed(seed, s, 38)), 0.0, 0)
        wins += recovery_error(truth, svt_complete(obs, tight).estimate).rel_frob <= 1e-4
    full_err = 0.0
    full_tol = SolverParams().rel_stop_tol
    for geom_M, K in ((8, 1), (64, 3)):
        g = make_ula(geom_M, 0.25, 0.5)
        scene = random_scene(rng, K, 0.5, 0.1)
        truth = data_matrix(g, g, scene)
        obs = observe(truth, sample_uniform(truth.shape, truth.size, 0), 0.0, 0)
        full_err = max(full_err, recovery_error(truth, svt_complete(obs).estimate).rel_frob)
    cfg = default_config("recovery-phase")
    cfg.seed, cfg.trials, cfg.workers = seed, trials, workers
    cfg.sweep = sorted(set(cfg.sweep) | {64 * 64})
    table = run_recovery_phase(cfg)
    succ, n = table.column("successes"), table.column("trials")
    mono, drops = monotone_within_bands(succ, n)
    reach = any(k / t >= 0.95 for m, k, t in zip(table.column("m"), succ, n) if m <= 0.5 * 64 * 64)
    full_rate = succ[-1] == n[-1]
    elapsed = time.perf_counter() - t0
    ok = wins >= 48 and full_err <= full_tol and mono and reach and full_rate and elapsed < 600
    rates = ",".join(f"{k}/{t}" for k, t in zip(succ, n))
    return ok, (f"rank-1 {wins}/50; full-obs err {full_err:.1e}<= {full_tol:.0e}; "
                f"phase {rates} (drops {drops}); >=0.95 by m<=M^2/2: {reach}; {elapsed:.0f}s < 600s")


@_timed(11, "noisy completion stability")
def criterion_11(seed: int = 0, count: int = 20):
    """Noisy error stays under the stability bound whenever the noiseless solve is exact."""
    rng = substream(seed, _S_NOISY)
    M, m, sigma = 12, 86, 0.05
    g = make_ula(M, 0.25, 0.5)
    exact = bad = 0
    worst = 0.0
    for s in range(count):
        truth = data_matrix(g, g, random_scene(rng, 2, 0.5, 0.05))
        mask = sample_uniform(truth.shape, m, trial_seed(seed, s, m))
        clean = svt_complete(observe(truth, mask, 0.0, 0), SolverParams(rel_stop_tol=1e-6,
                                                                         max_iters=5000))
        if recovery_error(truth, clean.estimate).rel_frob > 1e-4:
            continue
        exact += 1
        obs = observe(truth, mask, sigma, trial_seed(seed, s, m))
        err = recovery_error(truth, noisy_complete(obs, obs.delta).estimate).abs_frob
        limit = stability_bound(M, M, m, obs.delta)
        worst = max(worst, err / limit)
        bad += err > limit
    formula = stability_bound(10, 10, 50, 0.1)
    ok = exact > 0 and bad == 0 and abs(formula - 3.0284) <= 1e-3
    return ok, (f"{exact}/{count} exact noiseless, {bad} bound violations, worst err/bound "
                f"{worst:.3f}; bound(10,10,50,0.1)={formula:.4f}")


@_timed(12, "sample-count formulas")
def criterion_12(seed: int = 0):
    """Formula outputs agree with an independent log-domain evaluation."""
    rng = substream(seed, 107)
    worst, flag_bad = 0.0, 0

    def rel(a, b):
        return abs(a - b) / abs(b)

    for _ in range(200):
        N = int(rng.integers(2, 5000))
        r = int(rng.integers(1, 20))
        mu0, mu1, mu = (float(v) for v in rng.uniform(1, 8, 3))
        c = SampleConstants(*(float(v) for v in rng.uniform(0.5, 4, 3)), float(rng.uniform(2.1, 5)))
        th = sample_requirement(N, r, mu0, mu1, mu, c)
        L = math.log(N)
        ll = math.log(L)
        lead = max(2 * math.log(mu1), 0.5 * math.log(mu0) + math.log(mu1),
                   math.log(mu0) + 0.25 * math.log(N))
        ref_gen = math.exp(math.log(c.C) + lead + math.log(N * r * c.beta) + ll)
        ref_low = math.exp(math.log(c.C * mu0 * r * c.beta) + 1.2 * math.log(N) + ll)
        ref_q = math.exp(math.log(c.C1) + 4 * math.log(mu) + math.log(N) + 2 * math.log(r) + 2 * ll)
        ref_p = math.exp(math.log(c.C2) + 2 * math.log(mu) + math.log(N * r) + 6 * ll)
        worst = max(worst, rel(th.incoherent_general, ref_gen), rel(th.incoherent_low_rank, ref_low),
                    rel(th.strong_quartic, ref_q), rel(th.strong_polylog, ref_p))
        flag_bad += th.low_rank_eligible != (r * mu0 <= N ** 0.2)
        q, p = ula_sample_estimate(N, r, c)
        worst = max(worst, rel(q, math.exp(math.log(c.C1) + 4 * math.log(r) + math.log(N) + 2 * ll)),
                    rel(p, math.exp(math.log(c.C2) + 2 * math.log(r) + math.log(N) + 6 * ll)))
    ex = sample_requirement(64, 3, math.sqrt(3), math.sqrt(3), math.sqrt(3)).strong_polylog
    ex_ref = 3 * 64 * 3 * math.log(64) ** 6
    worst = max(worst, rel(ex, ex_ref))
    return worst <= 1e-12 and flag_bad == 0, (f"max rel deviation {worst:.1e}, "
                                              f"{flag_bad} eligibility mismatches")


CRITERIA = (criterion_01, criterion_02, criterion_03, criterion_04, criterion_05, criterion_06,
            criterion_07, criterion_08, criterion_09, criterion_10, criterion_11, criterion_12)


def run_acceptance(cfg: ExperimentConfig | None = None, only=None, echo=print) -> list[CriterionResult]:
    """Run every criterion (or those numbered in ``only``) with the config's seed."""
    seed = 0 if cfg is None else cfg.seed
    workers = 1 if cfg is None else cfg.workers
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        res = fn(seed, workers=workers) if fn is criterion_10 else fn(seed)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
