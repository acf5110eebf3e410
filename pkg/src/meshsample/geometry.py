"""Triangle mesh container, OBJ/STL loading, normalization, and surface point picking."""

from __future__ import annotations

import struct

import numpy as np

from .errors import (
    DegenerateMeshError,
    EmptyMeshError,
    InvalidScaleError,
    ParseError,
)

# Faces below this area are kept in the mesh but never sampled and carry no normal.
DEGENERATE_AREA = 1e-12


class Aabb:
    """Axis-aligned bounding box with inclusive min/max corners."""

    __slots__ = ("min", "max")

    def __init__(self, lo, hi):
        self.min = np.asarray(lo, dtype=np.float64).reshape(3).copy()
        self.max = np.asarray(hi, dtype=np.float64).reshape(3).copy()
        if np.any(self.min > self.max):
            raise ValueError("aabb min exceeds max")
        self.min.setflags(write=False)
        self.max.setflags(write=False)

    @classmethod
    def of_points(cls, points) -> "Aabb":
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if pts.size == 0:
            raise ValueError("no points")
        return cls(pts.min(axis=0), pts.max(axis=0))

    @property
    def center(self) -> np.ndarray:
        return (self.min + self.max) * 0.5

    @property
    def extent(self) -> np.ndarray:
        return self.max - self.min

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.extent))

    def expanded(self, pad: float) -> "Aabb":
        return Aabb(self.min - pad, self.max + pad)

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return np.all((pts >= self.min - tol) & (pts <= self.max + tol), axis=1)

    def __repr__(self):
        return f"Aabb({self.min.tolist()}, {self.max.tolist()})"


class TriangleMesh:
    """Immutable indexed triangle surface with per-face areas and unit normals.

    Triangles that repeat a vertex index are dropped on construction; triangles
    that are geometrically degenerate (area below ``DEGENERATE_AREA``) are kept
    but flagged with a zero normal and excluded from area-weighted sampling.
    """

    __slots__ = ("vertices", "triangles", "face_normals", "face_areas", "_aabb", "_cdf", "_cdf_faces")

    def __init__(self, vertices, triangles):
        vertices = np.ascontiguousarray(vertices, dtype=np.float64).reshape(-1, 3)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64).reshape(-1, 3)
        if triangles.size:
            if triangles.min() < 0 or triangles.max() >= len(vertices):
                raise ValueError("triangle vertex index out of range")
            distinct = (
                (triangles[:, 0] != triangles[:, 1])
                & (triangles[:, 1] != triangles[:, 2])
                & (triangles[:, 2] != triangles[:, 0])
            )
            triangles = triangles[distinct]
        if len(triangles) == 0:
            raise EmptyMeshError("mesh has no valid triangles")

        a = vertices[triangles[:, 0]]
        b = vertices[triangles[:, 1]]
        c = vertices[triangles[:, 2]]
        cross = np.cross(b - a, c - a)
        norm = np.linalg.norm(cross, axis=1)
        areas = 0.5 * norm
        normals = np.zeros_like(cross)
        ok = areas >= DEGENERATE_AREA
        normals[ok] = cross[ok] / norm[ok, None]

        self.vertices = vertices
        self.triangles = triangles
        self.face_areas = areas
        self.face_normals = normals
        for arr in (self.vertices, self.triangles, self.face_areas, self.face_normals):
            arr.setflags(write=False)
        self._aabb = None
        self._cdf = None
        self._cdf_faces = None

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    @property
    def total_area(self) -> float:
        return float(self.face_areas.sum())

    @property
    def aabb(self) -> Aabb:
        if self._aabb is None:
            self._aabb = Aabb.of_points(self.vertices)
        return self._aabb

    def corners(self):
        """Per-face vertex coordinate arrays (a, b, c), each (T, 3)."""
        return (
            self.vertices[self.triangles[:, 0]],
            self.vertices[self.triangles[:, 1]],
            self.vertices[self.triangles[:, 2]],
        )

    def _area_table(self):
        # Cumulative areas over nondegenerate faces only, so degenerate faces
        # are never picked.
        if self._cdf is None:
            faces = np.nonzero(self.face_areas >= DEGENERATE_AREA)[0]
            if faces.size == 0:
                raise DegenerateMeshError("mesh total area is zero")
            self._cdf = np.cumsum(self.face_areas[faces])
            self._cdf_faces = faces
        return self._cdf, self._cdf_faces

    def is_closed(self):
        """(closed, boundary_edge_count, nonmanifold_edge_count) from edge multiplicity."""
        edges = np.vstack(
            [
                self.triangles[:, [0, 1]],
                self.triangles[:, [1, 2]],
                self.triangles[:, [2, 0]],
            ]
        )
        edges.sort(axis=1)
        _, counts = np.unique(edges, axis=0, return_counts=True)
        boundary = int(np.sum(counts == 1))
        nonmanifold = int(np.sum(counts > 2))
        return boundary == 0 and nonmanifold == 0, boundary, nonmanifold


def barycentric_position(a, b, c, tau1, tau2):
    """Map unit-square randoms to a uniform point on triangle (a, b, c).

    Weights are u = 1 - sqrt(tau1), v = tau2 * sqrt(tau1), w = 1 - u - v.
    Accepts scalars or broadcastable arrays.
    """
    tau1 = np.asarray(tau1, dtype=np.float64)
    tau2 = np.asarray(tau2, dtype=np.float64)
    root = np.sqrt(tau1)
    u = 1.0 - root
    v = tau2 * root
    w = 1.0 - u - v
    return (
        u[..., None] * np.asarray(a, dtype=np.float64)
        + v[..., None] * np.asarray(b, dtype=np.float64)
        + w[..., None] * np.asarray(c, dtype=np.float64)
    )


def random_surface_points(mesh: TriangleMesh, count: int, rng: np.random.Generator):
    """Draw ``count`` uniform surface points.

    Triangles are picked by cumulative-area inversion, positions by the
    square-root barycentric map. Returns (positions (count,3), face indices).
    """
    cdf, faces = mesh._area_table()
    total = cdf[-1]
    pick = rng.random(count) * total
    slot = np.minimum(np.searchsorted(cdf, pick, side="right"), len(faces) - 1)
    tri = faces[slot]
    tau1 = rng.random(count)
    tau2 = rng.random(count)
    a = mesh.vertices[mesh.triangles[tri, 0]]
    b = mesh.vertices[mesh.triangles[tri, 1]]
    c = mesh.vertices[mesh.triangles[tri, 2]]
    return barycentric_position(a, b, c, tau1, tau2), tri


def random_surface_point(mesh: TriangleMesh, rng: np.random.Generator):
    """Single uniform surface point; returns (position, triangle index)."""
    pos, tri = random_surface_points(mesh, 1, rng)
    return pos[0], int(tri[0])


def normalize_mesh(mesh: TriangleMesh) -> TriangleMesh:
    """Uniformly rescale and recenter so the AABB has max extent 1 about the origin."""
    box = mesh.aabb
    longest = float(box.extent.max())
    if longest <= 0.0:
        raise DegenerateMeshError("mesh bounding box has zero extent")
    center = box.center
    if longest == 1.0 and np.all(center == 0.0):
        return mesh
    return TriangleMesh((mesh.vertices - center) / longest, mesh.triangles)


def scale_mesh(mesh: TriangleMesh, factors) -> TriangleMesh:
    """Scale each axis by a positive factor (scalar or 3-vector)."""
    f = np.asarray(factors, dtype=np.float64).reshape(-1)
    if f.size == 1:
        f = np.repeat(f, 3)
    if f.shape != (3,):
        raise InvalidScaleError(f"expected scalar or 3 factors, got {factors!r}")
    if np.any(f <= 0.0) or not np.all(np.isfinite(f)):
        raise InvalidScaleError(f"scale factors must be positive, got {f.tolist()}")
    if np.all(f == 1.0):
        return mesh
    return TriangleMesh(mesh.vertices * f, mesh.triangles)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

_STL_RECORD = struct.Struct("<12xfff fff fff H")  # skip normal, 3 vertices, attr


def load_mesh(path, fmt: str | None = None) -> TriangleMesh:
    """Load an OBJ or ASCII/binary STL file.

    ``fmt`` is "obj" or "stl"; when omitted it is taken from the file suffix.
    """
    path = str(path)
    if fmt is None:
        lower = path.lower()
        if lower.endswith(".obj"):
            fmt = "obj"
        elif lower.endswith(".stl"):
            fmt = "stl"
        else:
            raise ParseError(f"cannot infer mesh format from {path!r}")
    fmt = fmt.lower()
    with open(path, "rb") as fh:
        data = fh.read()
    return load_mesh_bytes(data, fmt)


def load_mesh_bytes(data: bytes, fmt: str) -> TriangleMesh:
    """Parse raw OBJ/STL bytes; see :func:`load_mesh`."""
    fmt = fmt.lower()
    if fmt == "obj":
        try:
            text = data.decode("utf-8", errors="replace")
        except Exception as exc:  # pragma: no cover - decode with replace cannot fail
            raise ParseError(f"cannot decode OBJ: {exc}") from exc
        return _parse_obj(text)
    if fmt == "stl":
        return _parse_stl(data)
    raise ParseError(f"unknown mesh format {fmt!r}")


def _parse_obj(text: str) -> TriangleMesh:
    verts = []
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        key = tokens[0]
        if key == "v":
            if len(tokens) < 4:
                raise ParseError(f"line {lineno}: vertex needs 3 coordinates")
            try:
                verts.append((float(tokens[1]), float(tokens[2]), float(tokens[3])))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad vertex coordinate") from exc
        elif key == "f":
            if len(tokens) < 4:
                raise ParseError(f"line {lineno}: face needs at least 3 indices")
            idx = []
            for tok in tokens[1:]:
                head = tok.split("/", 1)[0]
                try:
                    i = int(head)
                except ValueError as exc:
                    raise ParseError(f"line {lineno}: bad face index {tok!r}") from exc
                if i < 1:
                    raise ParseError(f"line {lineno}: face indices are 1-based, got {i}")
                idx.append(i - 1)
            for k in range(1, len(idx) - 1):  # fan triangulation
                faces.append((idx[0], idx[k], idx[k + 1]))
        # all other keywords (vn, vt, o, g, s, usemtl, mtllib, ...) are ignored
    if not faces:
        raise EmptyMeshError("OBJ contains no faces")
    faces_arr = np.asarray(faces, dtype=np.int64)
    if faces_arr.max() >= len(verts):
        raise ParseError(
            f"face index {int(faces_arr.max()) + 1} exceeds vertex count {len(verts)}"
        )
    try:
        return TriangleMesh(np.asarray(verts, dtype=np.float64), faces_arr)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _parse_stl(data: bytes) -> TriangleMesh:
    if len(data) >= 84:
        (count,) = struct.unpack_from("<I", data, 80)
        if len(data) == 84 + 50 * count:
            return _parse_stl_binary(data, count)
    if data[:5].lower() == b"solid":
        return _parse_stl_ascii(data)
    raise ParseError("not a valid binary or ASCII STL file")


def _parse_stl_binary(data: bytes, count: int) -> TriangleMesh:
    if count == 0:
        raise EmptyMeshError("STL contains no triangles")
    rec = np.frombuffer(
        data,
        dtype=np.dtype(
            [("normal", "<f4", (3,)), ("verts", "<f4", (3, 3)), ("attr", "<u2")]
        ),
        count=count,
        offset=84,
    )
    tri_pts = rec["verts"].astype(np.float64).reshape(-1, 3)
    return _weld(tri_pts)


def _parse_stl_ascii(data: bytes) -> TriangleMesh:
    text = data.decode("utf-8", errors="replace")
    coords = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens:
            continue
        if tokens[0].lower() == "vertex":
            if len(tokens) < 4:
                raise ParseError(f"line {lineno}: vertex needs 3 coordinates")
            try:
                coords.append((float(tokens[1]), float(tokens[2]), float(tokens[3])))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad vertex coordinate") from exc
    if not coords:
        raise EmptyMeshError("STL contains no triangles")
    if len(coords) % 3 != 0:
        raise ParseError(f"ASCII STL vertex count {len(coords)} is not a multiple of 3")
    return _weld(np.asarray(coords, dtype=np.float64))


def _weld(tri_pts: np.ndarray) -> TriangleMesh:
    # Exact-coordinate weld: STL repeats shared vertices per facet, but the sdf
    # module needs real shared edges to detect watertightness.
    view = np.ascontiguousarray(tri_pts).view([("", tri_pts.dtype)] * 3).ravel()
    _, first, inverse = np.unique(view, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    vertices = tri_pts[first]
    triangles = inverse.reshape(-1, 3).astype(np.int64)
    return TriangleMesh(vertices, triangles)


def _float_repr(x: float) -> str:
    # Shortest decimal string that round-trips the double exactly.
    return repr(float(x))


def save_mesh(mesh: TriangleMesh, path) -> int:
    """Write an ASCII OBJ; vertex coordinates round-trip bit-exactly. Returns bytes written."""
    lines = []
    for x, y, z in mesh.vertices:
        lines.append(f"v {_float_repr(x)} {_float_repr(y)} {_float_repr(z)}")
    for i, j, k in mesh.triangles:
        lines.append(f"f {i + 1} {j + 1} {k + 1}")
    blob = ("\n".join(lines) + "\n").encode("ascii")
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)
