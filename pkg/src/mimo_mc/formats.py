"""Plain-text persistence for matrices, observations, flat records and CSV tables.

Floats are written with ``repr``, the shortest decimal string that round-trips
to the same double, so every format is bit-exact.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import InvalidParameterError
from .signal import PartialObservation, SampleMask


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if x is None:
        return "nan"
    return str(x)


def _open(target, mode):
    if isinstance(target, (str, Path)):
        return open(target, mode, newline=""), True
    return target, False


def _entry_lines(rows, cols, values) -> Iterable[str]:
    for i, j, v in zip(rows, cols, values):
        yield f"{int(i)} {int(j)} {repr(float(v.real))} {repr(float(v.imag))}\n"


def write_matrix(target, A: np.ndarray):
    """``rows cols`` header, then one ``i j re im`` line per entry in row-major order."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise InvalidParameterError("expected a 2-D matrix")
    f, close = _open(target, "w")
    try:
        f.write(f"{A.shape[0]} {A.shape[1]}\n")
        r, c = np.indices(A.shape)
        f.writelines(_entry_lines(r.ravel(), c.ravel(), A.ravel()))
    finally:
        if close:
            f.close()


def _data_lines(f: TextIO):
    for line in f:
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def _parse_entries(lines, shape):
    rows, cols, vals = [], [], []
    for line in lines:
        parts = line.split()
        if len(parts) != 4:
            raise InvalidParameterError(f"malformed entry line: {line!r}")
        rows.append(int(parts[0]))
        cols.append(int(parts[1]))
        vals.append(complex(float(parts[2]), float(parts[3])))
    rows, cols = np.array(rows, dtype=int), np.array(cols, dtype=int)
    if rows.size and (rows.min() < 0 or rows.max() >= shape[0] or cols.min() < 0 or cols.max() >= shape[1]):
        raise InvalidParameterError("entry index out of range")
    return rows, cols, np.array(vals, dtype=complex)


def read_matrix(source) -> np.ndarray:
    f, close = _open(source, "r")
    try:
        lines = _data_lines(f)
        n1, n2 = (int(t) for t in next(lines).split())
        rows, cols, vals = _parse_entries(lines, (n1, n2))
    finally:
        if close:
            f.close()
    if rows.size != n1 * n2:
        raise InvalidParameterError(f"expected {n1 * n2} entries, got {rows.size}")
    A = np.full((n1, n2), np.nan + 0j)
    A[rows, cols] = vals
    if np.isnan(A.real).any():
        raise InvalidParameterError("matrix file has missing or duplicate entries")
    return A


def write_observation(target, obs: PartialObservation):
    """``rows cols`` header, a ``delta <value>`` line, then the observed entries."""
    f, close = _open(target, "w")
    try:
        f.write(f"{obs.shape[0]} {obs.shape[1]}\n")
        f.write(f"delta {repr(float(obs.delta))}\n")
        f.writelines(_entry_lines(obs.mask.rows, obs.mask.cols, obs.values))
    finally:
        if close:
            f.close()


def read_observation(source) -> PartialObservation:
    f, close = _open(source, "r")
    try:
        lines = _data_lines(f)
        n1, n2 = (int(t) for t in next(lines).split())
        key, val = next(lines).split()
        if key != "delta":
            raise InvalidParameterError("observation file lacks a delta line")
        rows, cols, vals = _parse_entries(lines, (n1, n2))
    finally:
        if close:
            f.close()
    return PartialObservation(SampleMask((n1, n2), rows, cols), vals, float(val))


def format_record(record: Mapping) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in record.items())


def parse_record(text: str) -> dict:
    """Inverse of :func:`format_record`; numeric values come back as ``int``/``float``."""
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        k, _, v = line.partition("=")
        out[k.strip()] = _parse_scalar(v.strip())
    return out


def _parse_scalar(v: str):
    if v in ("true", "false"):
        return v == "true"
    try:
        return int(v)
    except ValueError:
        pass
    try:
        return float(v)
    except ValueError:
        return v


def config_hash(config: Mapping) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def csv_text(header: list[str], rows: Iterable[Iterable], config: Mapping | None = None,
             seed: int | None = None, extra: Mapping | None = None) -> str:
    """CSV with a leading ``#`` comment line carrying the config hash and seed."""
    buf = io.StringIO()
    meta = {}
    if config is not None:
        meta["config_sha256"] = config_hash(config)
    if seed is not None:
        meta["seed"] = seed
    meta.update(extra or {})
    buf.write("# " + " ".join(f"{k}={_fmt(v)}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def read_csv(source) -> tuple[dict, list[dict]]:
    """Return ``(meta, rows)``; values are parsed into numbers where possible."""
    f, close = _open(source, "r")
    try:
        text = f.read()
    finally:
        if close:
            f.close()
    lines = text.splitlines()
    meta = {}
    while lines and lines[0].startswith("#"):
        for tok in lines.pop(0)[1:].split():
            k, _, v = tok.partition("=")
            meta[k] = _parse_scalar(v)
    reader = csv.DictReader(lines)
    return meta, [{k: _parse_scalar(v) for k, v in row.items()} for row in reader]

