"""Deterministic CSV / JSON writers.

Floats are written with ``repr``, the shortest decimal that round-trips,
so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .integrators import Trajectory


def _fmt(x) -> str:
    return repr(float(x))


def write_rows(path, header: Sequence[str], rows: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(map(_fmt, row)) + "\n")
    return path


def wave_header(n: int) -> list[str]:
    return ["t"] + [f"x_{i}" for i in range(n)] + [f"v_{i}" for i in range(n)]


def doubled_header(n: int) -> list[str]:
    cols = ["t"]
    for k in range(2 * n):
        cols += [f"re_xhat_{k}", f"im_xhat_{k}"]
    return cols


def write_wave_csv(path, traj: Trajectory) -> Path:
    n = traj.samples.shape[1] // 2
    return write_rows(path, wave_header(n), np.column_stack([traj.times, traj.samples]))


def write_doubled_csv(path, traj: Trajectory) -> Path:
    s = np.asarray(traj.samples, dtype=complex)
    inter = np.empty((s.shape[0], 2 * s.shape[1]))
    inter[:, 0::2] = s.real
    inter[:, 1::2] = s.imag
    return write_rows(path, doubled_header(s.shape[1] // 2), np.column_stack([traj.times, inter]))


def write_matrix_csv(path, m: np.ndarray) -> Path:
    """Row-major dump with ``re,im`` cells (each cell quoted)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    m = np.asarray(m, dtype=complex)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        for row in m:
            writer.writerow([f"{_fmt(z.real)},{_fmt(z.imag)}" for z in row])
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with Path(path).open() as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_jsonable(obj), indent=2) + "\n")
    return path
