"""Verification utilities: min-distance, on-surface, and inside-volume checks.

These are deliberately independent of the sampler internals (vectorized numpy
throughout, no shared kernels) so they can serve as oracles over sampler
output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TriangleMesh
from .particles import ParticleSet
from .sdf import SignedDistanceField

# All-pairs checking is exact and fast enough below this size; larger sets go
# through the tree-accelerated (still exact) path.
ALL_PAIRS_LIMIT = 5000


@dataclass
class QualityReport:
    particle_count: int
    spacing: float | None
    min_pair_distance: float
    nn_stats: tuple[float, float, float] | None
    violations: list[tuple[int, int]] = field(default_factory=list)
    on_surface_max_error: float | None = None
    inside_fraction: float | None = None

    @property
    def ok(self) -> bool:
        return not self.violations


def _nn_distances(positions: np.ndarray) -> np.ndarray:
    from scipy.spatial import cKDTree

    dist, _ = cKDTree(positions).query(positions, k=2)
    return dist[:, 1]


def verify_min_distance(ps: ParticleSet, spacing: float) -> QualityReport:
    """Exact check that all pairs are at least ``spacing`` apart (inclusive).

    Below ALL_PAIRS_LIMIT particles every pair is tested directly; above, an
    exact tree query finds all pairs closer than ``spacing``.
    """
    pos = ps.positions
    n = len(pos)
    if n == 0:
        raise ValueError("empty particle set")
    if n == 1:
        return QualityReport(1, spacing, np.inf, None)

    violations = []
    if n <= ALL_PAIRS_LIMIT:
        min_d = np.inf
        for i in range(n - 1):
            d = np.linalg.norm(pos[i + 1 :] - pos[i], axis=1)
            m = float(d.min())
            if m < min_d:
                min_d = m
            for j in np.nonzero(d < spacing)[0]:
                violations.append((i, int(i + 1 + j)))
    else:
        from scipy.spatial import cKDTree

        tree = cKDTree(pos)
        for i, j in sorted(tree.query_pairs(spacing)):
            if np.linalg.norm(pos[i] - pos[j]) < spacing:
                violations.append((int(i), int(j)))
        min_d = float(_nn_distances(pos).min())

    nn = _nn_distances(pos)
    return QualityReport(
        particle_count=n,
        spacing=spacing,
        min_pair_distance=min_d,
        nn_stats=(float(nn.min()), float(nn.mean()), float(nn.max())),
        violations=violations,
    )


def point_mesh_distances(points: np.ndarray, mesh: TriangleMesh, block: int = 256) -> np.ndarray:
    """Exact distance from each point to the mesh, by brute force over all triangles.

    Vectorized region-based closest-point computation, blocked over points to
    bound memory.
    """
    a, b, c = mesh.corners()
    ab = b - a
    ac = c - a
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    out = np.empty(len(pts))
    for s in range(0, len(pts), block):
        p = pts[s : s + block][:, None, :]  # (B, 1, 3)
        ap = p - a[None, :, :]
        d1 = np.einsum("tj,btj->bt", ab, ap)
        d2 = np.einsum("tj,btj->bt", ac, ap)
        bp = p - b[None, :, :]
        d3 = np.einsum("tj,btj->bt", ab, bp)
        d4 = np.einsum("tj,btj->bt", ac, bp)
        cp = p - c[None, :, :]
        d5 = np.einsum("tj,btj->bt", ab, cp)
        d6 = np.einsum("tj,btj->bt", ac, cp)

        va = d3 * d6 - d5 * d4
        vb = d5 * d2 - d1 * d6
        vc = d1 * d4 - d3 * d2

        with np.errstate(divide="ignore", invalid="ignore"):
            # interior barycentric solution
            denom = va + vb + vc
            v = np.where(denom != 0.0, vb / denom, 0.0)
            w = np.where(denom != 0.0, vc / denom, 0.0)
            t_ab = np.where(d1 != d3, d1 / (d1 - d3), 0.0)
            t_ac = np.where(d2 != d6, d2 / (d2 - d6), 0.0)
            bc_den = (d4 - d3) + (d5 - d6)
            t_bc = np.where(bc_den != 0.0, (d4 - d3) / bc_den, 0.0)

        v = np.clip(v, 0.0, 1.0)
        w = np.clip(w, 0.0, 1.0)
        t_ab = np.clip(t_ab, 0.0, 1.0)
        t_ac = np.clip(t_ac, 0.0, 1.0)
        t_bc = np.clip(t_bc, 0.0, 1.0)

        q_in = a[None] + v[..., None] * ab[None] + w[..., None] * ac[None]
        q_ab = a[None] + t_ab[..., None] * ab[None]
        q_ac = a[None] + t_ac[..., None] * ac[None]
        q_bc = b[None] + t_bc[..., None] * (c - b)[None]

        d_in = np.einsum("btj,btj->bt", p - q_in, p - q_in)
        # the interior solution is only valid inside; elsewhere poison it
        inside = (va > 0) & (vb > 0) & (vc > 0)
        d_in = np.where(inside, d_in, np.inf)
        d_ab = np.einsum("btj,btj->bt", p - q_ab, p - q_ab)
        d_ac = np.einsum("btj,btj->bt", p - q_ac, p - q_ac)
        d_bc = np.einsum("btj,btj->bt", p - q_bc, p - q_bc)
        d_a = np.einsum("btj,btj->bt", ap, ap)
        d_b = np.einsum("btj,btj->bt", bp, bp)
        d_c = np.einsum("btj,btj->bt", cp, cp)

        best = np.minimum.reduce([d_in, d_ab, d_ac, d_bc, d_a, d_b, d_c])
        out[s : s + len(best)] = np.sqrt(best.min(axis=1))
    return out


def verify_on_surface(ps: ParticleSet, mesh: TriangleMesh) -> float:
    """Max exact point-to-mesh distance over the set."""
    if len(ps) == 0:
        raise ValueError("empty particle set")
    return float(point_mesh_distances(ps.positions, mesh).max())


def verify_inside(ps: ParticleSet, field: SignedDistanceField, invert: bool = False):
    """Fraction of particles on the correct side of the surface.

    Non-inverted sets must have strictly negative signed distance, inverted
    sets strictly positive; points beyond the field domain count as outside.
    Returns (fraction, offending indices).
    """
    if len(ps) == 0:
        raise ValueError("empty particle set")
    values = field.query_many(ps.positions, out_of_domain="outside")
    good = (values > 0.0) if invert else (values < 0.0)
    bad = np.nonzero(~good)[0]
    return float(good.sum()) / len(ps), [int(i) for i in bad]
