import json
import math

import numpy as np
import pytest

from mimo_mc.bounds import lemma2_xi
from mimo_mc.bounds.kernel import min_separation_xi
from mimo_mc.harness import (ConfigError, default_config, load_config, random_scene,
                             run_coherence_sweep, run_eta_sweep, run_recovery_phase, run_surface)
from mimo_mc.harness.acceptance import monotone_within_bands, wilson_interval
from mimo_mc.harness.experiments import bounds_record, surface_step
from mimo_mc.rng import substream


def test_default_configs_validate():
    for kind in ("coherence-sweep", "eta-sweep", "surface", "recovery-phase", "bounds",
                 "complete", "acceptance"):
        assert default_config(kind).kind == kind


def test_invalid_configs():
    cfg = default_config()
    cfg.trials = 0
    with pytest.raises(ConfigError):
        cfg.validate()
    cfg = default_config()
    cfg.sweep = [10, 10, 20]
    with pytest.raises(ConfigError):
        cfg.validate()
    with pytest.raises(ConfigError):
        load_config(kind="coherence-sweep", overrides=["nope=1"])
    with pytest.raises(ConfigError):
        load_config(kind="coherence-sweep", overrides=["tx.nope=1"])
    with pytest.raises(ConfigError):
        load_config(kind="coherence-sweep", overrides=["trials"])
    with pytest.raises(ConfigError):
        load_config(kind="no-such-kind")


def test_load_config_file_and_overrides(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"kind": "coherence-sweep",
                             "tx": {"kind": "ULA", "count": 8, "spacing": 0.25, "wavelength": 0.5},
                             "scene": {"angles_deg": [-20, 30], "reflections": [[1, 0], [0, -1]]},
                             "sweep": [8, 12]}))
    cfg = load_config(p, overrides=["sweep=[8,16,24]", "rx.count=9", "scene.angles_deg=[0,45]"],
                      seed=4)
    assert cfg.sweep == [8, 16, 24] and cfg.rx.count == 9 and cfg.seed == 4
    scene = cfg.scene.fixed()
    np.testing.assert_allclose(scene.angles, np.deg2rad([0, 45]))
    np.testing.assert_array_equal(scene.reflections, [1, -1j])
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_random_scene_respects_floor():
    rng = substream(0, 9)
    for _ in range(20):
        s = random_scene(rng, 4, 0.5, 0.1)
        assert min_separation_xi(0.5, s.angles) >= 0.1
        assert np.all(np.abs(s.angles) < math.pi / 2)
        np.testing.assert_allclose(np.abs(s.reflections), 1)


def test_coherence_sweep_single_target_is_one():
    cfg = default_config()
    cfg.scene.angles_deg, cfg.scene.reflections = [12.0], [[1, 0]]
    t = run_coherence_sweep(cfg)
    np.testing.assert_allclose(t.column("mu_measured"), 1, atol=1e-12)
    assert t.column("mu0_bound") == [1.0] * len(cfg.sweep)


def test_coherence_sweep_tracks_bound_and_is_reproducible():
    cfg = default_config()
    t = run_coherence_sweep(cfg)
    mu, bound = t.column("mu_measured"), t.column("mu0_bound")
    assert t.violations == 0 and all(m <= b + 1e-9 for m, b in zip(mu, bound))
    assert all(b2 <= b1 for b1, b2 in zip(bound, bound[1:]))
    assert mu[-1] < mu[0] and bound[-1] < bound[0]
    assert t.to_csv(cfg) == run_coherence_sweep(cfg).to_csv(cfg)


def test_coherence_sweep_marks_infeasible_rows():
    cfg = default_config()
    cfg.scene.angles_deg = [-10.0, -8.0, 20.0, 40.0]
    cfg.sweep = [4, 8, 100]
    t = run_coherence_sweep(cfg)
    feas = t.column("feasible")
    assert feas[0] is False and feas[-1] is True
    assert math.isnan(t.column("mu0_bound")[0])
    assert "nan,false" in t.to_csv(cfg)


def test_eta_sweep_properties():
    cfg = default_config("eta-sweep")
    cfg.sweep = [50, 200, 1000, 5000]
    t = run_eta_sweep(cfg)
    rows = t.rows
    top = [r for r in rows if r[0] == pytest.approx(math.pi / 2)]
    assert all(r[2] == pytest.approx((2 - math.sqrt(2)) / 2, abs=1e-15) for r in top)
    by_m = {}
    for eta, M, xi, b, feas in rows:
        assert xi == lemma2_xi(eta)
        by_m.setdefault(M, []).append(b if feas else math.inf)
    for vals in by_m.values():
        assert all(b2 <= b1 for b1, b2 in zip(vals, vals[1:]))
    for eta in cfg.etas:
        curve = [r[3] for r in rows if r[0] == eta and r[4]]
        assert curve and curve[-1] == min(curve)
    assert all(r[3] < 1.1 for r in rows if r[1] == 5000 and r[0] >= 0.5)


def test_surface_grid():
    cfg = default_config("surface")
    cfg.resolution = 0.2
    t = run_surface(cfg)
    step = t.extra["resolution"]
    assert step == surface_step(0.2) <= 0.2
    n = round(2 * math.pi / step) + 1
    assert len(t.rows) == n * n
    vals = np.array(t.column("value")).reshape(n, n)
    np.testing.assert_allclose(np.diag(vals), 400, rtol=1e-12)
    np.testing.assert_allclose(vals[0], vals[-1], atol=1e-9)
    np.testing.assert_allclose(vals[:, 0], vals[:, -1], atol=1e-9)


def test_high_dof_surface_is_denser():
    def crossings(spacing):
        cfg = default_config("surface")
        cfg.tx.kind, cfg.tx.count, cfg.tx.spacing = "ULA", 8, spacing
        cfg.resolution = 0.05
        v = np.array(run_surface(cfg).column("value"))
        return np.count_nonzero(np.diff(np.sign(v - v.mean())))
    assert crossings(8 * 0.5 / 2) > 3 * crossings(0.25)


def test_recovery_phase_small():
    cfg = default_config("recovery-phase")
    cfg.tx.count = cfg.rx.count = 12
    cfg.scene.num_targets = 2
    cfg.sweep, cfg.trials = [20, 80, 144], 6
    t = run_recovery_phase(cfg)
    assert t.header == ["m", "trials", "successes", "mean_rel_err"]
    succ = t.column("successes")
    assert succ[-1] == 6 and succ[0] <= succ[-1]
    cfg2 = default_config("recovery-phase")
    cfg2.tx.count = cfg2.rx.count = 12
    cfg2.scene.num_targets = 2
    cfg2.sweep, cfg2.trials, cfg2.workers = [20, 80, 144], 6, 2
    assert run_recovery_phase(cfg2).to_csv(cfg2) == t.to_csv(cfg)


def test_bounds_record_for_general_arrays():
    cfg = default_config("bounds")
    cfg.tx.kind = cfg.rx.kind = "UCA"
    cfg.tx.count = cfg.rx.count = 20
    cfg.scene.angles_deg, cfg.scene.reflections = [-60.0, 40.0], None
    cfg.eta = 1.5
    rec = bounds_record(cfg)
    assert rec["bound_feasible"]
    assert rec["measured_mu_u"] <= rec["bound_mu0_bound"]


def test_wilson_and_monotone_helper():
    lo, hi = wilson_interval(25, 50)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 50)[0] == 0 and wilson_interval(50, 50)[1] == 1
    assert monotone_within_bands([0, 10, 30, 50], [50] * 4) == (True, 0)
    assert monotone_within_bands([0, 30, 28, 50], [50] * 4) == (True, 1)
    assert not monotone_within_bands([0, 45, 10, 50], [50] * 4)[0]
    assert not monotone_within_bands([0, 30, 28, 40, 38], [50] * 5)[0]
