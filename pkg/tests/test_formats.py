import io

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from mimo_mc import InvalidParameterError
from mimo_mc.formats import (config_hash, csv_text, format_record, parse_record, read_csv,
                             read_matrix, read_observation, write_matrix, write_observation)
from mimo_mc.signal import observe, sample_uniform

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(st.integers(1, 6).flatmap(lambda n: arrays(np.complex128, (n, 7 - n),
                                                  elements=st.builds(complex, finite, finite))))
def test_matrix_round_trip_is_bit_exact(A):
    buf = io.StringIO()
    write_matrix(buf, A)
    B = read_matrix(io.StringIO(buf.getvalue()))
    assert B.shape == A.shape
    assert A.view(np.uint64).tobytes() == B.view(np.uint64).tobytes()


def test_matrix_header_and_lines(tmp_path):
    p = tmp_path / "m.txt"
    write_matrix(p, np.array([[1 + 2j, 0.1], [-0.0, 3j]]))
    lines = p.read_text().splitlines()
    assert lines[0] == "2 2"
    assert lines[1] == "0 0 1.0 2.0"
    assert lines[2] == "0 1 0.1 0.0"
    assert read_matrix(p)[1, 1] == 3j


def test_matrix_rejects_missing_entries():
    with pytest.raises(InvalidParameterError):
        read_matrix(io.StringIO("2 2\n0 0 1 0\n"))
    with pytest.raises(InvalidParameterError):
        read_matrix(io.StringIO("1 1\n3 0 1 0\n"))


@given(st.integers(0, 2**32), st.floats(0, 2))
def test_observation_round_trip(seed, noise):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((5, 6)) + 1j * rng.standard_normal((5, 6))
    obs = observe(A, sample_uniform(A.shape, 13, seed), noise, seed)
    buf = io.StringIO()
    write_observation(buf, obs)
    text = buf.getvalue()
    assert text.splitlines()[1].startswith("delta ")
    back = read_observation(io.StringIO(text))
    assert back.mask == obs.mask
    assert back.delta == obs.delta
    assert np.array_equal(back.values, obs.values)


def test_record_round_trip_types():
    rec = {"rank": 3, "mu_u": 1.0000000000000002, "feasible": False, "name": "x", "nan": None}
    back = parse_record(format_record(rec))
    assert back["rank"] == 3 and isinstance(back["rank"], int)
    assert back["mu_u"] == rec["mu_u"]
    assert back["feasible"] is False
    assert back["name"] == "x"
    assert np.isnan(back["nan"])


def test_csv_comment_and_header():
    text = csv_text(["a", "b"], [[1, 0.5], [2, 1e-300]], {"k": 1}, seed=7)
    lines = text.splitlines()
    assert lines[0] == f"# config_sha256={config_hash({'k': 1})} seed=7"
    assert lines[1] == "a,b"
    meta, rows = read_csv(io.StringIO(text))
    assert meta["seed"] == 7
    assert rows[1] == {"a": 2, "b": 1e-300}


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
