import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mimo_mc import (ArrayKind, InvalidParameterError, InvalidSceneError, TargetScene,
                     make_custom, make_spiral, make_uca, make_ula, normalized_positions)


def test_ula_single_antenna_at_origin():
    g = make_ula(1, 0.25, 0.5)
    assert g.positions.tolist() == [[0.0, 0.0]]
    assert g.kind == ArrayKind.ULA


def test_ula_positions_half_wavelength():
    g = make_ula(4, 0.25, 0.5)
    np.testing.assert_array_equal(g.positions[:, 0], 0.0)
    np.testing.assert_allclose(g.positions[:, 1], [0, 0.25, 0.5, 0.75], rtol=0, atol=1e-15)


def test_high_dof_transmit_ula():
    g = make_ula(20, 10 * 0.5 / 2, 0.5)
    np.testing.assert_allclose(np.diff(g.positions[:, 1]), 2.5)


@pytest.mark.parametrize("bad", [dict(spacing=0.0), dict(spacing=-1.0), dict(wavelength=0.0)])
def test_ula_rejects_nonpositive(bad):
    kw = dict(num_antennas=4, spacing=0.25, wavelength=0.5) | bad
    with pytest.raises(InvalidParameterError):
        make_ula(**kw)


def test_zero_antennas_rejected():
    with pytest.raises(InvalidParameterError):
        make_ula(0, 0.25, 0.5)


def test_uca_example_array_has_unit_normalized_radius():
    g = make_uca(20, 0.5, 0.5)
    np.testing.assert_allclose(np.linalg.norm(normalized_positions(g), axis=1), 1.0, rtol=1e-12)


def test_uca_single_antenna_and_quarters():
    assert np.allclose(make_uca(1, 1.0, 1.0).positions, [[1.0, 0.0]])
    p = make_uca(4, 1.0, 0.5).positions
    np.testing.assert_allclose(np.arctan2(p[:, 1], p[:, 0]) % (2 * math.pi),
                               [0, math.pi / 2, math.pi, 3 * math.pi / 2], atol=1e-12)


def test_uca_rejects_bad_radius():
    with pytest.raises(InvalidParameterError):
        make_uca(4, 0.0, 0.5)


def test_spiral_origin_and_growing_radius():
    assert np.allclose(make_spiral(1, 0.1, 0.5).positions, 0.0)
    radii = np.linalg.norm(make_spiral(8, 0.1, 0.5).positions, axis=1)
    assert np.all(np.diff(radii) > 0)
    with pytest.raises(InvalidParameterError):
        make_spiral(8, -0.1, 0.5)


def test_normalized_positions_examples():
    np.testing.assert_allclose(normalized_positions(make_ula(2, 0.25, 0.5)), [[0, 0], [0, 0.5]])
    np.testing.assert_allclose(normalized_positions(make_custom([[1, 1]], 2.0)), [[0.5, 0.5]])


def test_positions_are_read_only():
    g = make_ula(3, 0.25, 0.5)
    with pytest.raises(ValueError):
        g.positions[0, 0] = 1.0


def test_custom_rejects_nonfinite():
    with pytest.raises(InvalidParameterError):
        make_custom([[0, np.nan]], 0.5)


@given(st.integers(1, 64), st.floats(0.01, 5), st.floats(0.05, 3), st.floats(0.1, 10))
def test_wavelength_rescale_scales_normalized_positions(M, d, lam, c):
    a = normalized_positions(make_ula(M, d, lam))
    b = normalized_positions(make_ula(M, d, c * lam))
    np.testing.assert_allclose(b, a / c, rtol=1e-12, atol=1e-300)


@given(st.integers(1, 80), st.floats(0.01, 5), st.floats(0.05, 3))
def test_ula_normalized_y_is_arithmetic(M, d, lam):
    r = normalized_positions(make_ula(M, d, lam))
    np.testing.assert_allclose(r[:, 1], np.arange(M) * (d / lam), rtol=1e-12)


@given(st.integers(1, 80), st.floats(0.01, 10))
def test_uca_on_circle(M, R):
    radii = np.linalg.norm(make_uca(M, R, 0.5).positions, axis=1)
    np.testing.assert_allclose(radii, R, rtol=1e-12)


def test_scene_defaults_and_validation():
    s = TargetScene([0.1, 0.2])
    assert s.num_targets == 2
    np.testing.assert_array_equal(s.reflections, [1, 1])
    np.testing.assert_array_equal(s.speeds, [0, 0])
    with pytest.raises(InvalidSceneError):
        TargetScene([0.1, 0.2], [1.0, 0.0])
    with pytest.raises(InvalidParameterError):
        TargetScene([0.1, 0.2], [1.0])
    with pytest.raises(InvalidParameterError):
        TargetScene([])
    with pytest.raises(InvalidParameterError):
        TargetScene([0.1], pulse_index=0)


def test_scene_subset_and_scaling():
    s = TargetScene([0.1, 0.2, 0.3], [1, 2j, 3])
    sub = s.subset([0, 2])
    np.testing.assert_array_equal(sub.angles, [0.1, 0.3])
    np.testing.assert_array_equal(s.scaled(2j).reflections, [2j, -4, 6j])
