"""Shared fixtures and independent reference implementations for the tests."""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np
import pytest

import tspfreq as tf
from tspfreq import kernels

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()


def rand_inst(n: int, seed: int) -> tf.Instance:
    """Perturbed uniform-random instance; the standard test subject."""
    return tf.perturb(tf.gen_random(n, seed), seed=seed)


def euclid_inst(n: int, seed: int) -> tf.Instance:
    """Random planar points with real Euclidean distances."""
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2)) * 100.0
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(d, 0.0)
    return tf.Instance(n, "EXPLICIT_MATRIX", matrix=d)


def euc2d_text(coords, name="test") -> str:
    lines = [
        f"NAME : {name}",
        "TYPE : TSP",
        f"DIMENSION : {len(coords)}",
        "EDGE_WEIGHT_TYPE : EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for k, (x, y) in enumerate(coords, start=1):
        lines.append(f"{k} {x} {y}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def unit_square_instance() -> tf.Instance:
    """EUC_2D unit square: every rounded distance is 1, all pairing sums tie."""
    return tf.parse_tsplib(euc2d_text([(0, 0), (0, 1), (1, 1), (1, 0)]))


# --- independent straight-from-the-reference distance functions (math, not numpy)

def ref_euc2d(x1, y1, x2, y2) -> int:
    return int(math.floor(math.sqrt((x1 - x2) ** 2 + (y1 - y2) ** 2) + 0.5))


def ref_att(x1, y1, x2, y2) -> int:
    rij = math.sqrt(((x1 - x2) ** 2 + (y1 - y2) ** 2) / 10.0)
    tij = int(math.floor(rij + 0.5))
    return tij + 1 if tij < rij else tij


def _ref_geo_rad(coord: float) -> float:
    deg = int(coord)
    minutes = coord - deg
    return 3.141592 * (deg + 5.0 * minutes / 3.0) / 180.0


def ref_geo(lat1, lon1, lat2, lon2) -> int:
    la1, lo1 = _ref_geo_rad(lat1), _ref_geo_rad(lon1)
    la2, lo2 = _ref_geo_rad(lat2), _ref_geo_rad(lon2)
    q1 = math.cos(lo1 - lo2)
    q2 = math.cos(la1 - la2)
    q3 = math.cos(la1 + la2)
    return int(6378.388 * math.acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0)


# --- optional external data (real benchmark files are not bundled)

def tsplib_dir() -> Path | None:
    cand = os.environ.get("TSPFREQ_TSPLIB_DIR")
    if cand and Path(cand).is_dir():
        return Path(cand)
    if (DATA_DIR / "tsplib").is_dir():
        return DATA_DIR / "tsplib"
    return None


def tsplib_file(stem: str, suffix: str) -> Path | None:
    base = tsplib_dir()
    if base is None:
        return None
    path = base / f"{stem}{suffix}"
    return path if path.is_file() else None


def oliver30_file() -> Path | None:
    cand = os.environ.get("TSPFREQ_OLIVER30")
    if cand and Path(cand).is_file():
        return Path(cand)
    path = DATA_DIR / "oliver30.tsp"
    return path if path.is_file() else None
