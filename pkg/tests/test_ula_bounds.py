import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from mimo_mc import InvalidParameterError, TargetScene, make_uca, make_ula
from mimo_mc.bounds import (beta_sup_finite, dirichlet_sq, lemma2_xi, ula_bounds,
                            ula_bounds_for_scene)
from mimo_mc.bounds.ula import k_max, side_bound
from mimo_mc.coherence import coherence_report
from mimo_mc.formats import format_record, parse_record
from mimo_mc.signal import data_matrix


def test_single_target_bound_is_one():
    for M in (1, 5, 64):
        b = ula_bounds(M, M, 1, None, None)
        assert b.feasible and b.mu0_bound == 1 and b.mu1_bound == 1


def test_twenty_four_quarter_against_grid():
    b = ula_bounds(20, 20, 4, 0.25, 0.25)
    grid_beta = float(dirichlet_sq(20, np.linspace(0.25, 0.5, 10**6)).max())
    assert b.beta_t == pytest.approx(grid_beta, rel=1e-6)
    assert b.mu0_bound == pytest.approx(20 / (20 - 3 * math.sqrt(1.7326233474947417)), rel=1e-12)
    assert b.mu1_bound == pytest.approx(2 * b.mu0_bound, rel=1e-15)


def test_infeasible_report_has_no_bounds():
    b = ula_bounds(8, 8, 5, 0.02, 0.02)
    assert not b.feasible
    assert b.mu0_bound is None and b.mu1_bound is None
    assert b.k_max < 5


def test_side_bound_and_k_max():
    assert side_bound(10, 1, 99.0) == 1
    assert side_bound(10, 3, 25.0) == math.inf
    assert side_bound(10, 2, 25.0) == pytest.approx(2.0)
    assert k_max((10, 20), (25.0, 16.0)) == pytest.approx(5.0)


def test_unequal_arrays_take_the_larger_side():
    b = ula_bounds(12, 40, 3, 0.2, 0.2)
    bt = 12 / (12 - 2 * math.sqrt(beta_sup_finite(12, 0.2)))
    br = 40 / (40 - 2 * math.sqrt(beta_sup_finite(40, 0.2)))
    assert b.mu0_bound == pytest.approx(max(bt, br), rel=1e-12)


def test_argument_validation():
    with pytest.raises(InvalidParameterError):
        ula_bounds(8, 8, 0, 0.1, 0.1)
    with pytest.raises(InvalidParameterError):
        ula_bounds(8, 8, 2, 0.7, 0.1)
    with pytest.raises(InvalidParameterError):
        ula_bounds(8, 8, 2, None, 0.1)
    with pytest.raises(InvalidParameterError):
        ula_bounds_for_scene(make_uca(8, 0.5, 0.5), make_ula(8, 0.25, 0.5), TargetScene([0, 1]))


def test_uniform_variant_is_looser():
    a = ula_bounds(30, 30, 3, 0.1, 0.1)
    b = ula_bounds(30, 30, 3, 0.1, 0.1, uniform=True)
    assert b.mu0_bound >= a.mu0_bound
    assert b.beta_t == pytest.approx(1 / math.sin(0.1 * math.pi) ** 2)


def test_record_round_trip():
    rec = ula_bounds(16, 16, 3, 0.2, 0.15).as_dict()
    assert parse_record(format_record(rec)) == rec


@settings(max_examples=15)
@given(st.integers(2, 5), st.floats(0.01, 0.5))
def test_bound_nonincreasing_in_m_and_tends_to_one(K, xi):
    vals = []
    for M in (8, 16, 32, 64, 128, 256, 512, 1024):
        b = ula_bounds(M, M, K, xi, xi)
        vals.append(b.mu0_bound if b.feasible else math.inf)
    assert all(v2 <= v1 + 1e-12 for v1, v2 in zip(vals, vals[1:]))
    tail = ula_bounds(20000, 20000, K, xi, xi)
    assert tail.feasible and tail.mu0_bound - 1 < 0.1


@given(st.integers(2, 5), st.integers(8, 200), st.floats(0.05, 1.5), st.floats(0.05, 1.5))
def test_bound_nonincreasing_in_eta(K, M, e1, e2):
    lo, hi = sorted((e1, e2))
    a = ula_bounds(M, M, K, lemma2_xi(lo), lemma2_xi(lo))
    b = ula_bounds(M, M, K, lemma2_xi(hi), lemma2_xi(hi))
    if a.feasible:
        assert b.feasible and b.mu0_bound <= a.mu0_bound + 1e-12


@settings(max_examples=40)
@given(st.lists(st.floats(-1.55, 1.55), min_size=2, max_size=5), st.integers(8, 48),
       st.integers(8, 48), st.integers(0, 2**31))
def test_bound_validity(angles, Mt, Mr, seed):
    tx, rx = make_ula(Mt, 0.25, 0.5), make_ula(Mr, 0.25, 0.5)
    scene = TargetScene(angles, np.random.default_rng(seed).standard_normal(len(angles)) + 1j)
    b = ula_bounds_for_scene(tx, rx, scene)
    assume(b.feasible and b.xi > 1e-6)
    rep = coherence_report(data_matrix(tx, rx, scene))
    assert rep.rank == len(angles)
    assert max(rep.mu_u, rep.mu_v) <= b.mu0_bound + 1e-9
    assert rep.mu1 <= b.mu1_bound + 1e-9


def test_mutated_beta_breaks_validity():
    rng = np.random.default_rng(5)
    broken = 0
    for _ in range(200):
        K, M = int(rng.integers(2, 6)), int(rng.integers(8, 65))
        scene = TargetScene(rng.uniform(-1.5, 1.5, K))
        g = make_ula(M, 0.25, 0.5)
        b = ula_bounds_for_scene(g, g, scene, beta_scale=0.5)
        if b.feasible:
            rep = coherence_report(data_matrix(g, g, scene))
            broken += max(rep.mu_u, rep.mu_v) > b.mu0_bound + 1e-9
    assert broken > 0
