import numpy as np
import pytest

from meshsample.errors import NonManifoldError, OpenMeshError, OutOfDomainError, ParseError
from meshsample.geometry import TriangleMesh
from meshsample.sdf import SignedDistanceField, build_sdf, inside_signs
from meshsample.shapes import flat_square, icosphere

from oracles import ray_parity_inside


@pytest.fixture(scope="module")
def sphere4():
    return icosphere(1.0, 4)


@pytest.fixture(scope="module")
def sphere_field(sphere4):
    return build_sdf(sphere4, resolution=40)


class TestBuild:
    def test_sphere_center_value(self, sphere_field):
        assert sphere_field.query((0.0, 0.0, 0.0)) == pytest.approx(-1.0, abs=0.01)

    def test_far_point_positive_distance(self, sphere4):
        field = build_sdf(sphere4, resolution=40, padding=0.6)
        for p, d in (((1.4, 0.0, 0.0), 0.4), ((0.0, -1.5, 0.0), 0.5)):
            assert field.query(p) == pytest.approx(d, abs=0.01)

    def test_open_mesh_rejected(self):
        with pytest.raises(OpenMeshError):
            build_sdf(flat_square(1.0), resolution=10)

    def test_nonmanifold_rejected(self):
        verts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 0], [-1, 0, 0]]
        tris = [[0, 1, 2], [0, 1, 3], [0, 1, 4], [0, 1, 5]]
        mesh = TriangleMesh(verts, tris)
        with pytest.raises(NonManifoldError):
            build_sdf(mesh, resolution=10)

    def test_min_resolution(self, sphere4):
        with pytest.raises(ValueError):
            build_sdf(sphere4, resolution=1)

    def test_values_finite(self, sphere_field):
        assert np.all(np.isfinite(sphere_field.values))

    def test_node_values_match_unsigned_distance(self, sphere4, sphere_field):
        # |node value| equals the exact distance to the mesh at that node
        from meshsample.quality import point_mesh_distances

        nx, ny, nz = sphere_field.node_dims
        rng = np.random.default_rng(0)
        ijk = np.column_stack(
            [rng.integers(0, nx, 80), rng.integers(0, ny, 80), rng.integers(0, nz, 80)]
        )
        nodes = sphere_field.origin + ijk * sphere_field.spacing
        got = np.abs(sphere_field.query_many(nodes))
        ref = point_mesh_distances(nodes, sphere4)
        assert np.allclose(got, ref, atol=1e-9)


class TestQuery:
    def test_node_identity(self, sphere_field):
        node = sphere_field.origin + np.array([3, 4, 5]) * sphere_field.spacing
        assert sphere_field.query(node) == pytest.approx(
            sphere_field.values[3, 4, 5], abs=1e-12
        )

    def test_edge_midpoint_linearity(self):
        values = np.zeros((2, 2, 2))
        values[0, 0, 0] = -0.2
        values[1, 0, 0] = +0.2
        field = SignedDistanceField(origin=(0, 0, 0), spacing=1.0, values=values)
        assert field.query((0.5, 0.0, 0.0)) == pytest.approx(0.0, abs=1e-15)

    def test_random_queries_against_analytic_sphere(self, sphere_field):
        rng = np.random.default_rng(42)
        pts = rng.uniform(-1.0, 1.0, size=(1000, 3))
        got = sphere_field.query_many(pts)
        ref = np.linalg.norm(pts, axis=1) - 1.0
        assert np.abs(got - ref).max() <= 2.0 * sphere_field.spacing

    def test_out_of_domain(self, sphere_field):
        with pytest.raises(OutOfDomainError):
            sphere_field.query((2.0, 0.0, 0.0))
        vals = sphere_field.query_many([[2.0, 0.0, 0.0]], out_of_domain="outside")
        assert vals[0] == np.inf

    def test_sign_matches_parity_oracle(self, sphere4, sphere_field):
        rng = np.random.default_rng(7)
        pts = rng.uniform(-0.99, 0.99, size=(1000, 3))
        vals = sphere_field.query_many(pts)
        # decisions only where the interpolated value is clearly one-sided
        clear = np.abs(vals) > sphere_field.spacing * np.sqrt(3.0)
        inside = ray_parity_inside(pts[clear], sphere4)
        assert np.array_equal(vals[clear] < 0, inside)

    def test_symmetry(self, sphere_field):
        rng = np.random.default_rng(9)
        pts = rng.uniform(-0.9, 0.9, size=(200, 3))
        mirrored = pts * np.array([-1.0, 1.0, 1.0])
        a = sphere_field.query_many(pts)
        b = sphere_field.query_many(mirrored)
        assert np.allclose(a, b, atol=1e-6 * 2.0 * np.sqrt(3.0))

    def test_refinement_monotone(self, sphere4):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-0.95, 0.95, size=(500, 3))
        ref = np.linalg.norm(pts, axis=1) - 1.0
        errors = []
        for res in (20, 40):
            f = build_sdf(sphere4, resolution=res)
            errors.append(np.abs(f.query_many(pts) - ref).max())
        assert errors[1] <= errors[0]


class TestInsideSigns:
    def test_cube_signs(self, cube):
        pts = np.array(
            [[0.0, 0.0, 0.0], [0.49, 0.49, 0.49], [0.51, 0.0, 0.0], [2.0, 2.0, 2.0],
             [0.25, 0.25, 0.25], [-0.49, 0.2, -0.3]]
        )
        got = inside_signs(cube, pts)
        assert got.tolist() == [-1, -1, 1, 1, -1, -1]

    def test_cube_lattice_alignments(self, cube):
        # diagonal-aligned points force the winding fallback; it must agree
        # with the obvious answer
        xs = np.linspace(-0.45, 0.45, 7)
        pts = np.column_stack([xs, xs, xs])  # exactly on the y=z, x=y planes
        got = inside_signs(cube, pts)
        assert np.all(got == -1)
        outs = np.column_stack([xs + 2.0, xs + 2.0, xs + 2.0])
        assert np.all(inside_signs(cube, outs) == 1)

    def test_sphere_against_oracle(self, sphere4):
        rng = np.random.default_rng(13)
        pts = rng.uniform(-1.2, 1.2, size=(800, 3))
        keep = np.abs(np.linalg.norm(pts, axis=1) - 1.0) > 1e-3  # stay off the shell
        pts = pts[keep]
        got = inside_signs(sphere4, pts)
        ref = ray_parity_inside(pts, sphere4)
        assert np.array_equal(got == -1, ref)


class TestCache:
    def test_round_trip(self, sphere_field, tmp_path):
        path = tmp_path / "sphere.lsdf"
        nbytes = sphere_field.save(path)
        assert nbytes == path.stat().st_size
        nx, ny, nz = sphere_field.node_dims
        assert nbytes == 68 + 8 * nx * ny * nz
        back = SignedDistanceField.load(path)
        assert back.node_dims == sphere_field.node_dims
        assert np.array_equal(back.values, sphere_field.values)
        assert np.allclose(back.origin, sphere_field.origin)
        assert back.spacing == pytest.approx(sphere_field.spacing, rel=1e-12)

    def test_truncated_rejected(self, sphere_field, tmp_path):
        path = tmp_path / "sphere.lsdf"
        sphere_field.save(path)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ParseError):
            SignedDistanceField.load(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.lsdf"
        path.write_bytes(b"NOPE" + b"\0" * 100)
        with pytest.raises(ParseError):
            SignedDistanceField.load(path)
