import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mimo_mc import InvalidParameterError, TargetScene, make_spiral, make_uca, make_ula
from mimo_mc.coherence import compact_svd
from mimo_mc.signal import (SampleMask, data_matrix, gain_matrix, observe, sample_uniform,
                            steering_matrix)

ULA = make_ula(4, 0.25, 0.5)


def test_broadside_steering_is_all_ones():
    X = steering_matrix(make_ula(3, 0.25, 0.5), [0.0])
    np.testing.assert_allclose(X, np.ones((3, 1)), atol=1e-15)


def test_endfire_steering_alternates():
    X = steering_matrix(ULA, [math.pi / 2])
    np.testing.assert_allclose(X[:, 0], [1, -1, 1, -1], atol=1e-12)


def test_uca_steering_entries():
    X = steering_matrix(make_uca(20, 0.5, 0.5), [0.0])
    ref = [cmath.exp(2j * math.pi * math.cos(2 * math.pi * l / 20)) for l in range(20)]
    np.testing.assert_allclose(X[:, 0], ref, atol=1e-12)


@given(st.lists(st.floats(-1.5, 1.5), min_size=1, max_size=5), st.integers(2, 12))
def test_ula_steering_is_vandermonde(angles, M):
    X = steering_matrix(make_ula(M, 0.25, 0.5), angles)
    powers = X[1] ** np.arange(M)[:, None]
    np.testing.assert_allclose(X, powers, atol=1e-9)


def test_gain_first_pulse_is_reflection():
    s = TargetScene([0.1, 0.4], [2 - 1j, 0.5j], speeds=[30.0, -7.0], pulse_index=1)
    np.testing.assert_array_equal(gain_matrix(s, 0.5), np.diag([2 - 1j, 0.5j]))


def test_gain_doppler_phase():
    s = TargetScene([0.0], [1.0], speeds=[10.0], pulse_index=2, pulse_repetition=1e-3)
    D = gain_matrix(s, 0.5)
    assert D[0, 0] == pytest.approx(cmath.exp(0.251327412287183j), abs=1e-14)


@given(st.lists(st.complex_numbers(min_magnitude=0.01, max_magnitude=10), min_size=1, max_size=6),
       st.integers(1, 20))
def test_gain_magnitudes_and_offdiagonal(refl, q):
    K = len(refl)
    s = TargetScene(np.linspace(-1, 1, K), refl, speeds=np.arange(K) * 3.0, pulse_index=q)
    D = gain_matrix(s, 0.5)
    np.testing.assert_allclose(np.abs(np.diag(D)), np.abs(refl), rtol=1e-12)
    assert np.all(D[~np.eye(K, dtype=bool)] == 0)


def test_single_target_data_matrix():
    tx, rx = make_uca(5, 0.5, 0.5), make_spiral(4, 0.1, 0.5)
    theta = 0.3
    Delta = data_matrix(tx, rx, TargetScene([theta]))
    T = np.array([math.cos(theta), math.sin(theta)])
    rr, rt = rx.positions / rx.wavelength, tx.positions / tx.wavelength
    ref = np.exp(2j * math.pi * (rr @ T)[:, None] + 2j * math.pi * (rt @ T)[None, :])
    np.testing.assert_allclose(Delta, ref, atol=1e-12)
    assert compact_svd(Delta).rank == 1
    np.testing.assert_allclose(np.abs(Delta), 1, atol=1e-12)


def test_uses_plain_transpose():
    tx, rx = make_ula(3, 0.25, 0.5), make_ula(5, 0.25, 0.5)
    s = TargetScene([0.2, -0.7], [1.0, 2j])
    ref = steering_matrix(rx, s.angles) @ gain_matrix(s, 0.5) @ steering_matrix(tx, s.angles).T
    np.testing.assert_allclose(data_matrix(tx, rx, s), ref, atol=1e-13)


def test_rank_two_and_duplicate():
    assert compact_svd(data_matrix(ULA, ULA, TargetScene([0.1, 0.9]))).rank == 2
    assert compact_svd(data_matrix(ULA, ULA, TargetScene([0.4, 0.4]))).rank == 1


def test_wavelength_mismatch():
    with pytest.raises(InvalidParameterError):
        data_matrix(make_ula(4, 0.25, 0.5), make_ula(4, 0.25, 0.6), TargetScene([0.1]))


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10),
       st.lists(st.floats(-1.5, 1.5), min_size=1, max_size=4))
def test_common_scaling_scales_matrix(c, angles):
    s = TargetScene(angles, np.arange(1, len(angles) + 1) * (1 + 0.5j))
    np.testing.assert_allclose(data_matrix(ULA, ULA, s.scaled(c)), c * data_matrix(ULA, ULA, s),
                               rtol=1e-12, atol=1e-12)


@given(st.lists(st.floats(-1.5, 1.5), min_size=1, max_size=6), st.integers(1, 10))
def test_rank_never_exceeds_targets(angles, M):
    g = make_ula(M, 0.25, 0.5)
    assert compact_svd(data_matrix(g, g, TargetScene(angles))).rank <= len(angles)


def test_sample_uniform_edges_and_determinism():
    full = sample_uniform((3, 4), 12, 7)
    assert full.as_bool().all()
    one = sample_uniform((3, 4), 1, 7)
    assert one.m == 1 and 0 <= one.rows[0] < 3 and 0 <= one.cols[0] < 4
    assert sample_uniform((8, 8), 32, 5) == sample_uniform((8, 8), 32, 5)
    assert sample_uniform((8, 8), 32, 5) != sample_uniform((8, 8), 32, 6)
    for m in (0, 13, 2.5):
        with pytest.raises(InvalidParameterError):
            sample_uniform((3, 4), m, 0)


@given(st.integers(1, 12), st.integers(1, 12), st.data())
def test_mask_entries_distinct_in_range(n1, n2, data):
    m = data.draw(st.integers(1, n1 * n2))
    mask = sample_uniform((n1, n2), m, data.draw(st.integers(0, 2**32)))
    pairs = set(zip(mask.rows.tolist(), mask.cols.tolist()))
    assert len(pairs) == m == mask.m
    assert SampleMask.from_bool(mask.as_bool()) == mask


def test_observe_noiseless_and_full():
    Delta = data_matrix(ULA, ULA, TargetScene([0.1, -0.5], [1, 1j]))
    obs = observe(Delta, sample_uniform(Delta.shape, Delta.size, 0), 0.0, 0)
    assert obs.delta == 0.0
    np.testing.assert_array_equal(obs.dense(), Delta)


def test_noise_energy_concentrates():
    m, sigma = 40, 0.1
    Delta = np.zeros((8, 8), complex)
    mask = sample_uniform((8, 8), m, 0)
    d2 = np.array([observe(Delta, mask, sigma, s).delta ** 2 for s in range(100)])
    # |z|^2 is exponential with mean sigma^2, so delta^2 has variance m sigma^4
    se = math.sqrt(m) * sigma**2 / math.sqrt(100)
    assert abs(d2.mean() - m * sigma**2) <= 5 * se


def test_noise_does_not_move_the_mask():
    Delta = np.ones((6, 6), complex)
    mask = sample_uniform((6, 6), 20, 3)
    a, b = observe(Delta, mask, 0.1, 3), observe(Delta, mask, 0.2, 3)
    np.testing.assert_allclose((a.values - 1) * 2, b.values - 1, atol=1e-14)
    assert a.delta == pytest.approx(np.linalg.norm(a.values - 1), rel=1e-12)
