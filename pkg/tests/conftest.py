from pathlib import Path

import pytest

from meshsample.geometry import load_mesh, normalize_mesh, scale_mesh
from meshsample.shapes import icosphere, unit_cube

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def cube():
    return unit_cube()


@pytest.fixture(scope="session")
def sphere():
    return icosphere(1.0, 3)


@pytest.fixture(scope="session")
def bunny():
    return load_mesh(DATA / "bunny.obj")


@pytest.fixture(scope="session")
def bunny2(bunny):
    # the Table-style pipeline: normalize, then scale the unit box by 2
    return scale_mesh(normalize_mesh(bunny), 2.0)
