"""
Pytest configuration and fixtures for the walk search tests
"""

import os
from pathlib import Path

import numpy as np
import pytest

from walksearch.config import current_settings
from walksearch.evolve import MarkedSet, WalkParams
from walksearch.export import RESULT_FIELDS, write_csv
from walksearch.lattice import LatticeConfig


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Run every test in a scratch directory with no WALKSEARCH_* variables"""
    for key in list(os.environ):
        if key.startswith("WALKSEARCH_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    current_settings.cache_clear()
    yield tmp_path
    current_settings.cache_clear()


@pytest.fixture
def square_lattice():
    """d=2, L=4: 16 vertices, small enough for dense checks"""
    return LatticeConfig(d=2, L=4)


@pytest.fixture
def cube_lattice():
    """d=3, L=4: 64 vertices"""
    return LatticeConfig(d=3, L=4)


@pytest.fixture
def plane_lattice():
    """d=2, L=8: 64 vertices with more than one block per axis and parity"""
    return LatticeConfig(d=2, L=8)


@pytest.fixture
def walk_params():
    return WalkParams(s=0.7, t1=3)


@pytest.fixture
def origin():
    return MarkedSet.single(0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Factory for normalised random real amplitude vectors"""

    def make(N: int) -> np.ndarray:
        v = rng.standard_normal(N)
        return v / np.linalg.norm(v)

    return make


@pytest.fixture
def linear_results_file(tmp_path) -> Path:
    """Results CSV whose P and t2/sqrt(N) are exactly linear in 1/L for d=2"""
    rows = []
    for L in (4, 8, 16, 32):
        # L=4 is an outlier that the 1/L fits must ignore
        P = 0.9 if L == 4 else 0.25 + 1.0 / L
        t2 = 1 if L == 4 else 2 * L + 3
        rows.append({"d": 2, "L": L, "s": 0.7, "t1": 3, "P": P, "t2": t2})
    return write_csv(tmp_path / "results.csv", RESULT_FIELDS, rows)
