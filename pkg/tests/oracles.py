"""Independent brute-force oracles used by the tests.

Deliberately implemented with plain vectorized numpy, sharing no code with
the package's compiled kernels.
"""

import numpy as np


def ray_parity_inside(points, mesh):
    """Point-in-polyhedron by counting +x ray crossings against all triangles.

    Suitable for generic (non-degenerate-alignment) query points.
    """
    a, b, c = mesh.corners()
    e1 = b - a
    e2 = c - a
    d = np.array([1.0, 0.0, 0.0])
    pvec = np.cross(d, e2)  # (T, 3)
    det = np.einsum("tj,tj->t", e1, pvec)
    good = np.abs(det) > 1e-15
    inv = np.zeros_like(det)
    inv[good] = 1.0 / det[good]

    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    inside = np.empty(len(pts), dtype=bool)
    for n, p in enumerate(pts):
        tvec = p - a
        u = np.einsum("tj,tj->t", tvec, pvec) * inv
        qvec = np.cross(tvec, e1)
        v = qvec[:, 0] * inv
        t = np.einsum("tj,tj->t", e2, qvec) * inv
        hits = good & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 0)
        inside[n] = bool(hits.sum() % 2)
    return inside


def point_triangle_distance(p, a, b, c):
    """Exact distance from one point to one triangle (scalar reference)."""
    p = np.asarray(p, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    # candidate features: the plane projection clipped to the triangle via
    # barycentric tests, all three edges, all three vertices
    best = min(np.linalg.norm(p - a), np.linalg.norm(p - b), np.linalg.norm(p - c))
    for q0, q1 in ((a, b), (b, c), (c, a)):
        e = q1 - q0
        denom = float(e @ e)
        if denom > 0:
            t = np.clip(float((p - q0) @ e) / denom, 0.0, 1.0)
            best = min(best, np.linalg.norm(p - (q0 + t * e)))
    n = np.cross(b - a, c - a)
    nn = float(n @ n)
    if nn > 0:
        w = float((p - a) @ n) / nn
        proj = p - w * n
        # barycentric membership of the projection
        area = np.linalg.norm(n)
        u = np.linalg.norm(np.cross(b - proj, c - proj)) / area
        v = np.linalg.norm(np.cross(c - proj, a - proj)) / area
        wv = np.linalg.norm(np.cross(a - proj, b - proj)) / area
        if abs(u + v + wv - 1.0) < 1e-9:
            best = min(best, abs(w) * np.sqrt(nn) / np.sqrt(nn))
            best = min(best, np.linalg.norm(p - proj))
    return float(best)


def brute_dart_throwing(candidates, min_dist, rng):
    """Classic dart throwing: random candidate order, accept on no conflict."""
    pts = np.asarray(candidates, dtype=np.float64)
    order = rng.permutation(len(pts))
    accepted = []
    acc = np.empty((0, 3))
    for i in order:
        p = pts[i]
        if len(accepted) == 0 or np.min(np.linalg.norm(acc - p, axis=1)) >= min_dist:
            accepted.append(i)
            acc = pts[accepted]
    return pts[accepted]


def min_pair_distance(points):
    pts = np.asarray(points, dtype=np.float64)
    best = np.inf
    for i in range(len(pts) - 1):
        d = np.linalg.norm(pts[i + 1 :] - pts[i], axis=1)
        best = min(best, float(d.min()))
    return best
