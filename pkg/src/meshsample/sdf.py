"""Regular-grid signed distance field of a closed triangle mesh.

Node values are exact point-to-mesh distances signed by an axis ray-parity
test (negative inside); queries interpolate trilinearly. The field can be
cached in a small documented binary format (see ``save``/``load``).
"""

from __future__ import annotations

import struct

import numpy as np

from . import _kernels
from .errors import NonManifoldError, OpenMeshError, OutOfDomainError, ParseError
from .geometry import Aabb, TriangleMesh, DEGENERATE_AREA

_MAGIC = b"LSDF"
_VERSION = 1

DEFAULT_RESOLUTION = 30


class SignedDistanceField:
    """Node-centered scalar grid; values[i, j, k] at origin + (i, j, k) * spacing."""

    __slots__ = ("origin", "spacing", "values", "resolution", "padding")

    def __init__(self, origin, spacing, values, resolution=None, padding=0.0):
        self.origin = np.asarray(origin, dtype=np.float64).reshape(3).copy()
        self.spacing = float(spacing)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        if self.values.ndim != 3:
            raise ValueError("values must be a 3D array")
        if min(self.values.shape) < 2:
            raise ValueError("need at least 2 nodes per axis")
        self.resolution = int(resolution) if resolution is not None else max(self.values.shape)
        self.padding = float(padding)
        self.origin.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def node_dims(self) -> tuple[int, int, int]:
        return self.values.shape

    @property
    def domain(self) -> Aabb:
        dims = np.asarray(self.values.shape, dtype=np.float64)
        return Aabb(self.origin, self.origin + (dims - 1.0) * self.spacing)

    def query(self, p) -> float:
        """Trilinearly interpolated signed distance at one point."""
        return float(self.query_many(np.asarray(p, dtype=np.float64).reshape(1, 3))[0])

    def query_many(self, points, out_of_domain: str = "raise") -> np.ndarray:
        """Vectorized query.

        ``out_of_domain`` is "raise" (OutOfDomainError) or "outside": report
        points beyond the padded domain as far outside (+infinity), which is
        how the samplers treat them.
        """
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        dims = np.asarray(self.values.shape, dtype=np.int64)
        span = (dims - 1) * self.spacing
        rel = (pts - self.origin) / self.spacing
        tol = 1e-9 * max(1.0, float(span.max()))
        ok = np.all((pts >= self.origin - tol) & (pts <= self.origin + span + tol), axis=1)
        if not ok.all():
            if out_of_domain == "raise":
                bad = pts[~ok][0]
                raise OutOfDomainError(f"point {bad.tolist()} outside SDF domain {self.domain}")
            if out_of_domain != "outside":
                raise ValueError("out_of_domain must be 'raise' or 'outside'")
        cell = np.floor(rel).astype(np.int64)
        np.clip(cell, 0, dims - 2, out=cell)
        frac = rel - cell
        np.clip(frac, 0.0, 1.0, out=frac)

        i, j, k = cell[:, 0], cell[:, 1], cell[:, 2]
        fx, fy, fz = frac[:, 0], frac[:, 1], frac[:, 2]
        v = self.values
        c00 = v[i, j, k] * (1 - fx) + v[i + 1, j, k] * fx
        c10 = v[i, j + 1, k] * (1 - fx) + v[i + 1, j + 1, k] * fx
        c01 = v[i, j, k + 1] * (1 - fx) + v[i + 1, j, k + 1] * fx
        c11 = v[i, j + 1, k + 1] * (1 - fx) + v[i + 1, j + 1, k + 1] * fx
        c0 = c00 * (1 - fy) + c10 * fy
        c1 = c01 * (1 - fy) + c11 * fy
        out = c0 * (1 - fz) + c1 * fz
        if not ok.all():
            out = np.where(ok, out, np.inf)
        return out

    def save(self, path) -> int:
        """Write the documented cache format; returns bytes written.

        Layout, little-endian: magic "LSDF", uint32 version, 3x uint32 node
        dims, 6x float64 domain AABB (min then max), then float64 node values
        with x varying fastest.
        """
        nx, ny, nz = self.values.shape
        dom = self.domain
        header = _MAGIC + struct.pack("<I", _VERSION) + struct.pack("<III", nx, ny, nz)
        header += struct.pack("<6d", *dom.min, *dom.max)
        payload = np.asfortranarray(self.values).ravel(order="F").astype("<f8").tobytes()
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
        return len(header) + len(payload)

    @classmethod
    def load(cls, path) -> "SignedDistanceField":
        with open(path, "rb") as fh:
            data = fh.read()
        if data[:4] != _MAGIC:
            raise ParseError("not an LSDF file")
        (version,) = struct.unpack_from("<I", data, 4)
        if version != _VERSION:
            raise ParseError(f"unsupported LSDF version {version}")
        nx, ny, nz = struct.unpack_from("<III", data, 8)
        box = struct.unpack_from("<6d", data, 20)
        expected = 68 + 8 * nx * ny * nz
        if len(data) != expected:
            raise ParseError(f"LSDF payload truncated: {len(data)} != {expected} bytes")
        values = np.frombuffer(data, dtype="<f8", count=nx * ny * nz, offset=68)
        values = values.reshape((nx, ny, nz), order="F")
        if nx < 2 or ny < 2 or nz < 2:
            raise ParseError("LSDF grid needs at least 2 nodes per axis")
        spacing = (box[3] - box[0]) / (nx - 1)
        return cls(origin=box[:3], spacing=spacing, values=values)


def _bucket_grid(mesh: TriangleMesh):
    """Uniform triangle-bucket grid over the tight mesh AABB, ~3 triangles per cell."""
    box = mesh.aabb
    extent = np.maximum(box.extent, 1e-12)
    target = max(1.0, mesh.triangle_count / 3.0)
    cell = float((extent.prod() / target) ** (1.0 / 3.0))
    cell = max(cell, 1e-9)
    dims = np.clip(np.ceil(extent / cell).astype(np.int64), 1, 96)
    return box.min.copy(), cell, dims


def build_sdf(
    mesh: TriangleMesh,
    resolution: int = DEFAULT_RESOLUTION,
    padding: float = 0.0,
) -> SignedDistanceField:
    """Evaluate the signed distance on a node grid covering the padded mesh AABB.

    ``resolution`` counts grid cells along the longest padded axis, so that
    axis gets resolution + 1 nodes; the other axes get proportionally many
    (at least 2). The mesh must be closed.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if padding < 0.0:
        raise ValueError("padding must be nonnegative")
    closed, boundary, nonmanifold = mesh.is_closed()
    if nonmanifold:
        raise NonManifoldError(f"{nonmanifold} edges are shared by more than two triangles")
    if boundary:
        raise OpenMeshError(f"mesh has {boundary} boundary edges")

    box = mesh.aabb.expanded(padding)
    longest = float(box.extent.max())
    if longest <= 0.0:
        raise ValueError("mesh bounding box has zero extent")
    spacing = longest / resolution
    node_dims = np.maximum(2, np.ceil(box.extent / spacing - 1e-12).astype(np.int64) + 1)

    ok = mesh.face_areas >= DEGENERATE_AREA
    tri = mesh.triangles[ok]
    ta = np.ascontiguousarray(mesh.vertices[tri[:, 0]])
    tb = np.ascontiguousarray(mesh.vertices[tri[:, 1]])
    tc = np.ascontiguousarray(mesh.vertices[tri[:, 2]])

    borigin, bcell, bdims = _bucket_grid(mesh)

    tmin = np.minimum(np.minimum(ta, tb), tc)
    tmax = np.maximum(np.maximum(ta, tb), tc)
    lo = np.clip(np.floor((tmin - borigin) / bcell).astype(np.int64), 0, bdims - 1)
    hi = np.clip(np.floor((tmax - borigin) / bcell).astype(np.int64), 0, bdims - 1)

    cell_off, cell_tri = _kernels.build_box_csr(lo, hi, bdims)
    colx_off, colx_tri = _kernels.build_rect_csr(lo[:, 1], hi[:, 1], lo[:, 2], hi[:, 2], bdims[1], bdims[2])
    coly_off, coly_tri = _kernels.build_rect_csr(lo[:, 2], hi[:, 2], lo[:, 0], hi[:, 0], bdims[2], bdims[0])
    colz_off, colz_tri = _kernels.build_rect_csr(lo[:, 0], hi[:, 0], lo[:, 1], hi[:, 1], bdims[0], bdims[1])

    values = np.empty(int(node_dims.prod()), dtype=np.float64)
    eps_t = 1e-12 * mesh.aabb.diagonal
    _kernels.sdf_node_values(
        box.min, spacing, node_dims,
        ta, tb, tc,
        mesh.aabb.min, mesh.aabb.max,
        borigin, bcell, bdims,
        cell_off, cell_tri,
        colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri,
        eps_t,
        values,
    )
    values = values.reshape(tuple(node_dims), order="F")
    return SignedDistanceField(
        origin=box.min,
        spacing=spacing,
        values=values,
        resolution=resolution,
        padding=padding,
    )


def inside_signs(mesh: TriangleMesh, points: np.ndarray) -> np.ndarray:
    """Exact inside(-1)/outside(+1) classification of points against a closed mesh.

    Same ray-parity machinery the SDF nodes use, without building a field.
    """
    closed, boundary, nonmanifold = mesh.is_closed()
    if nonmanifold:
        raise NonManifoldError(f"{nonmanifold} edges are shared by more than two triangles")
    if boundary:
        raise OpenMeshError(f"mesh has {boundary} boundary edges")
    ok = mesh.face_areas >= DEGENERATE_AREA
    tri = mesh.triangles[ok]
    ta = np.ascontiguousarray(mesh.vertices[tri[:, 0]])
    tb = np.ascontiguousarray(mesh.vertices[tri[:, 1]])
    tc = np.ascontiguousarray(mesh.vertices[tri[:, 2]])
    borigin, bcell, bdims = _bucket_grid(mesh)
    tmin = np.minimum(np.minimum(ta, tb), tc)
    tmax = np.maximum(np.maximum(ta, tb), tc)
    lo = np.clip(np.floor((tmin - borigin) / bcell).astype(np.int64), 0, bdims - 1)
    hi = np.clip(np.floor((tmax - borigin) / bcell).astype(np.int64), 0, bdims - 1)
    colx_off, colx_tri = _kernels.build_rect_csr(lo[:, 1], hi[:, 1], lo[:, 2], hi[:, 2], bdims[1], bdims[2])
    coly_off, coly_tri = _kernels.build_rect_csr(lo[:, 2], hi[:, 2], lo[:, 0], hi[:, 0], bdims[2], bdims[0])
    colz_off, colz_tri = _kernels.build_rect_csr(lo[:, 0], hi[:, 0], lo[:, 1], hi[:, 1], bdims[0], bdims[1])
    pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    out = np.empty(len(pts), dtype=np.int64)
    _kernels.inside_signs_points(
        pts, ta, tb, tc,
        mesh.aabb.min, mesh.aabb.max,
        borigin, bcell, bdims,
        colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri,
        1e-12 * mesh.aabb.diagonal,
        out,
    )
    return out
