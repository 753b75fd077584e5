"""
Shared test configuration for ym2d.

Fixtures provide concrete groups, observables, surface maps and
representations. Nothing is mocked: every test drives the real engines.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the src directory to the Python path
src_dir = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_dir))

from ym2d.config import get_settings  # noqa: E402
from ym2d.core import (  # noqa: E402
    ClassFunction,
    GroupModel,
    MatrixRep,
    sphere_one_edge,
    torus_one_face,
)


@pytest.fixture
def su2():
    return GroupModel("SU2")


@pytest.fixture
def u1():
    return GroupModel("U1")


@pytest.fixture
def chi2(su2):
    """Fundamental SU(2) character, the observable most checks use."""
    return ClassFunction.character(su2.irrep(2))


@pytest.fixture
def fundamental_rep(su2):
    return MatrixRep.for_irrep(su2.irrep(2))


@pytest.fixture
def sphere_map():
    return sphere_one_edge("1/2", "1/2")


@pytest.fixture
def torus_map():
    return torus_one_face(1)


@pytest.fixture
def rng():
    """Seeded generator for the random-matrix identity checks."""
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Each test sees settings rebuilt from its own environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()

