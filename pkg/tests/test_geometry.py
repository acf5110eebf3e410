import struct

import numpy as np
import pytest

from meshsample.errors import EmptyMeshError, InvalidScaleError, ParseError
from meshsample.geometry import (
    TriangleMesh,
    barycentric_position,
    load_mesh,
    load_mesh_bytes,
    normalize_mesh,
    random_surface_point,
    random_surface_points,
    save_mesh,
    scale_mesh,
)
from meshsample.shapes import box, unit_cube


def obj_bytes(text: str) -> bytes:
    return text.encode("ascii")


def binary_stl(triangles) -> bytes:
    tris = np.asarray(triangles, dtype=np.float64)
    out = b"\0" * 80 + struct.pack("<I", len(tris))
    for tri in tris:
        n = np.cross(tri[1] - tri[0], tri[2] - tri[0])
        ln = np.linalg.norm(n)
        n = n / ln if ln > 0 else n
        out += struct.pack("<3f", *n)
        for v in tri:
            out += struct.pack("<3f", *v)
        out += struct.pack("<H", 0)
    return out


class TestLoadMesh:
    def test_single_triangle_obj(self, tmp_path):
        path = tmp_path / "tri.obj"
        path.write_bytes(obj_bytes("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"))
        mesh = load_mesh(path)
        assert mesh.triangle_count == 1
        assert mesh.face_areas[0] == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(mesh.face_normals[0], [0, 0, 1], atol=1e-12)

    def test_vertex_index_out_of_range(self):
        with pytest.raises(ParseError):
            load_mesh_bytes(obj_bytes("v 0 0 0\nv 1 0 0\nf 1 2 3\n"), "obj")

    def test_zero_based_index_rejected(self):
        with pytest.raises(ParseError):
            load_mesh_bytes(obj_bytes("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"), "obj")

    def test_binary_stl_cube_area(self):
        cube = unit_cube()
        tris = cube.vertices[cube.triangles]
        mesh = load_mesh_bytes(binary_stl(tris), "stl")
        assert mesh.triangle_count == 12
        assert mesh.total_area == pytest.approx(6.0, abs=1e-9)
        # the weld restores shared vertices, so the cube is closed again
        assert mesh.is_closed()[0]

    def test_ascii_stl(self):
        text = (
            "solid squares\n"
            " facet normal 0 0 1\n  outer loop\n"
            "   vertex 0 0 0\n   vertex 1 0 0\n   vertex 0 1 0\n"
            "  endloop\n endfacet\n"
            "endsolid squares\n"
        )
        mesh = load_mesh_bytes(text.encode(), "stl")
        assert mesh.triangle_count == 1
        assert mesh.face_areas[0] == pytest.approx(0.5)

    def test_quad_face_fan_triangulated(self):
        mesh = load_mesh_bytes(
            obj_bytes("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n"), "obj"
        )
        assert mesh.triangle_count == 2
        assert mesh.total_area == pytest.approx(1.0)

    def test_slash_face_indices(self):
        mesh = load_mesh_bytes(
            obj_bytes("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2/2 3/3\n"), "obj"
        )
        assert mesh.triangle_count == 1

    def test_empty_obj(self):
        with pytest.raises(EmptyMeshError):
            load_mesh_bytes(obj_bytes("v 0 0 0\n"), "obj")

    def test_repeated_index_triangle_dropped(self):
        mesh = load_mesh_bytes(
            obj_bytes("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 2\nf 1 2 3\n"), "obj"
        )
        assert mesh.triangle_count == 1

    def test_garbage_stl(self):
        with pytest.raises(ParseError):
            load_mesh_bytes(b"\x01\x02\x03", "stl")

    def test_fuzzed_garbage_never_crashes(self):
        rng = np.random.default_rng(1234)
        for _ in range(60):
            blob = rng.integers(0, 256, size=rng.integers(0, 400), dtype=np.uint8).tobytes()
            for fmt in ("obj", "stl"):
                try:
                    load_mesh_bytes(blob, fmt)
                except (ParseError, EmptyMeshError):
                    pass  # any parse outcome is fine, crashes are not

    def test_binary_stl_starting_with_solid(self):
        # classic trap: binary files whose header begins with "solid"
        cube = unit_cube()
        tris = cube.vertices[cube.triangles]
        blob = binary_stl(tris)
        blob = b"solid" + blob[5:]
        mesh = load_mesh_bytes(blob, "stl")
        assert mesh.triangle_count == 12

    def test_obj_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(42)
        verts = rng.standard_normal((30, 3)) * np.pi
        tris = np.array([[i, (i + 7) % 30, (i + 13) % 30] for i in range(28)])
        mesh = TriangleMesh(verts, tris)
        path = tmp_path / "rt.obj"
        save_mesh(mesh, path)
        back = load_mesh(path)
        assert np.array_equal(back.vertices, mesh.vertices)
        assert np.array_equal(back.triangles, mesh.triangles)


class TestNormalizeScale:
    def test_big_cube_recentered(self):
        mesh = box((4.0, 4.0, 4.0), center=(10.0, 10.0, 10.0))
        out = normalize_mesh(mesh)
        assert np.allclose(out.aabb.extent, 1.0)
        assert np.allclose(out.aabb.center, 0.0)

    def test_idempotent(self):
        mesh = normalize_mesh(box((4.0, 2.0, 1.0), center=(3.0, -2.0, 0.5)))
        again = normalize_mesh(mesh)
        assert np.allclose(again.vertices, mesh.vertices, rtol=0, atol=1e-14)

    def test_already_normalized_identity(self):
        mesh = unit_cube()
        assert normalize_mesh(mesh) is mesh

    def test_aspect_preserved(self):
        out = normalize_mesh(box((2.0, 1.0, 1.0)))
        assert np.allclose(out.aabb.extent, [1.0, 0.5, 0.5])

    def test_area_scales_with_square(self):
        mesh = box((4.0, 4.0, 4.0), center=(10.0, 10.0, 10.0))
        out = normalize_mesh(mesh)
        assert out.total_area == pytest.approx(mesh.total_area / 16.0, rel=1e-12)

    def test_scale_rectangular_box_from_cube(self):
        out = scale_mesh(unit_cube(), (2.0, 1.0, 1.0))
        assert np.allclose(out.aabb.extent, [2.0, 1.0, 1.0])

    def test_scale_identity(self):
        mesh = unit_cube()
        assert scale_mesh(mesh, (1.0, 1.0, 1.0)) is mesh

    def test_scale_area_quadruples(self):
        out = scale_mesh(unit_cube(), 2.0)
        assert out.total_area == pytest.approx(24.0, rel=1e-12)

    def test_nonpositive_scale_rejected(self):
        with pytest.raises(InvalidScaleError):
            scale_mesh(unit_cube(), (1.0, 0.0, 1.0))
        with pytest.raises(InvalidScaleError):
            scale_mesh(unit_cube(), -2.0)


class TestSurfacePoints:
    def test_barycentric_corners(self):
        a, b, c = np.eye(3)
        assert np.allclose(barycentric_position(a, b, c, 0.0, 0.37), a)
        assert np.allclose(barycentric_position(a, b, c, 1.0, 1.0), b)
        assert np.allclose(barycentric_position(a, b, c, 1.0, 0.0), c)

    def test_barycentric_weights_sum(self):
        rng = np.random.default_rng(3)
        tau1 = rng.random(500)
        tau2 = rng.random(500)
        root = np.sqrt(tau1)
        u = 1.0 - root
        v = tau2 * root
        w = 1.0 - u - v
        assert np.all(u >= -1e-12) and np.all(v >= -1e-12) and np.all(w >= -1e-12)
        assert np.allclose(u + v + w, 1.0, atol=1e-12)

    def test_area_proportional_pick(self):
        # two triangles with areas 1 and 3: the larger gets 75% of the picks
        verts = [[0, 0, 0], [2, 0, 0], [0, 1, 0], [10, 0, 0], [16, 0, 0], [10, 1, 0]]
        mesh = TriangleMesh(verts, [[0, 1, 2], [3, 4, 5]])
        assert mesh.face_areas[0] == pytest.approx(1.0)
        assert mesh.face_areas[1] == pytest.approx(3.0)
        rng = np.random.default_rng(7)
        _, tri = random_surface_points(mesh, 100_000, rng)
        freq = float(np.mean(tri == 1))
        assert freq == pytest.approx(0.75, abs=0.01)

    def test_uniform_within_triangle(self):
        # midpoint subdivision splits a triangle into 4 congruent regions
        a = np.array([0.0, 0.0, 0.0])
        b = np.array([3.0, 0.0, 0.0])
        c = np.array([0.0, 2.0, 0.0])
        mesh = TriangleMesh([a, b, c], [[0, 1, 2]])
        rng = np.random.default_rng(11)
        pts, _ = random_surface_points(mesh, 100_000, rng)
        # barycentric coordinates via the 2D affine map
        m = np.column_stack([(b - a)[:2], (c - a)[:2]])
        uv = np.linalg.solve(m, (pts[:, :2] - a[:2]).T).T
        u = 1.0 - uv.sum(axis=1)
        counts = [
            np.mean(u > 0.5),
            np.mean(uv[:, 0] > 0.5),
            np.mean(uv[:, 1] > 0.5),
            np.mean((u <= 0.5) & (uv[:, 0] <= 0.5) & (uv[:, 1] <= 0.5)),
        ]
        for share in counts:
            assert share == pytest.approx(0.25, abs=0.01)

    def test_points_on_mesh(self, sphere):
        from meshsample.quality import point_mesh_distances

        rng = np.random.default_rng(5)
        pts, _ = random_surface_points(sphere, 500, rng)
        dist = point_mesh_distances(pts, sphere)
        assert dist.max() <= 1e-9 * sphere.aabb.diagonal

    def test_single_point_wrapper(self, cube):
        rng = np.random.default_rng(1)
        pos, tri = random_surface_point(cube, rng)
        assert pos.shape == (3,)
        assert 0 <= tri < cube.triangle_count

    def test_degenerate_faces_never_picked(self):
        verts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0], [3, 0, 0], [4, 0, 0]]
        mesh = TriangleMesh(verts, [[0, 1, 2], [3, 4, 5]])  # second face is collinear
        rng = np.random.default_rng(2)
        _, tri = random_surface_points(mesh, 2000, rng)
        assert np.all(tri == 0)


class TestMeshValidation:
    def test_face_area_formula(self, bunny):
        a, b, c = bunny.corners()
        ref = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
        assert np.allclose(bunny.face_areas, ref, rtol=1e-9)

    def test_normals_unit_length(self, bunny):
        ok = bunny.face_areas >= 1e-12
        lens = np.linalg.norm(bunny.face_normals[ok], axis=1)
        assert np.allclose(lens, 1.0, atol=1e-9)

    def test_closedness_detection(self, cube):
        assert cube.is_closed() == (True, 0, 0)
        open_mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        closed, boundary, nonmanifold = open_mesh.is_closed()
        assert not closed and boundary == 3 and nonmanifold == 0
