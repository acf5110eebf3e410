import numpy as np
import pytest

from meshsample.cli import apply_thread_cap
from meshsample.sdf import build_sdf
from meshsample.shapes import icosphere


def test_leaven_threads_env_caps_parallelism(monkeypatch):
    numba = pytest.importorskip("numba")
    before = numba.get_num_threads()
    try:
        monkeypatch.setenv("LEAVEN_THREADS", "1")
        apply_thread_cap()
        assert numba.get_num_threads() == 1
    finally:
        numba.set_num_threads(before)


def test_leaven_threads_zero_means_auto(monkeypatch):
    numba = pytest.importorskip("numba")
    before = numba.get_num_threads()
    monkeypatch.setenv("LEAVEN_THREADS", "0")
    apply_thread_cap()
    assert numba.get_num_threads() == before


def test_sdf_deterministic_across_thread_counts():
    numba = pytest.importorskip("numba")
    sphere = icosphere(1.0, 2)
    before = numba.get_num_threads()
    try:
        reference = build_sdf(sphere, resolution=16).values
        numba.set_num_threads(1)
        serial = build_sdf(sphere, resolution=16).values
    finally:
        numba.set_num_threads(before)
    assert np.array_equal(reference, serial)


def test_normalize_zero_extent_rejected():
    from meshsample.errors import DegenerateMeshError
    from meshsample.geometry import TriangleMesh, normalize_mesh

    # distinct indices, coincident coordinates: a zero-extent bounding box
    mesh = TriangleMesh([[1.0, 2.0, 3.0]] * 3, [[0, 1, 2]])
    with pytest.raises(DegenerateMeshError):
        normalize_mesh(mesh)
