import os
import sys

import pytest

# Add repo root to path so tests run from any directory
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from lpvoronoi.config import reset_settings
from lpvoronoi.geometry.norms import Vec2


@pytest.fixture(autouse=True)
def fresh_settings():
    """Each test reads the environment it sets up"""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def canonical_sites():
    """a = (-u,-1), b = (u,1) for u = 2"""
    return Vec2(-2.0, -1.0), Vec2(2.0, 1.0)
