"""Shared fixtures for the engine tests."""

import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from engine.boundary import two_step_meridian
from engine.config_loader import RunConfig


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def cfg(tmp_path):
    return RunConfig(out_dir=str(tmp_path / "out"))


@pytest.fixture
def quick_cfg(tmp_path):
    """Reduced sample counts for suite-level tests."""
    return RunConfig(out_dir=str(tmp_path / "out"), samples=128, grid=9, hull_samples=48,
                     width_starts=16, word_length=4, check_points=50)


@pytest.fixture
def hyperbolic_matrix():
    return np.array([[2.0, 1.0], [1.0, 1.0]])


@pytest.fixture
def elliptic_matrix():
    c, s = math.cos(0.7), math.sin(0.7)
    return np.array([[c, -s], [s, c]])


@pytest.fixture
def two_step():
    return two_step_meridian(math.pi / 2, 0.0)
