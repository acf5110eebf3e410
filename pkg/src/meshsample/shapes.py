"""Procedural test shapes: box, icosphere, flat square."""

from __future__ import annotations

import numpy as np

from .geometry import TriangleMesh

# Unit cube faces, outward CCW winding.
_CUBE_FACES = [
    (0, 2, 1), (0, 3, 2),  # -z
    (4, 5, 6), (4, 6, 7),  # +z
    (0, 1, 5), (0, 5, 4),  # -y
    (2, 3, 7), (2, 7, 6),  # +y
    (0, 4, 7), (0, 7, 3),  # -x
    (1, 2, 6), (1, 6, 5),  # +x
]


def box(extents=(1.0, 1.0, 1.0), center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Closed axis-aligned box as 12 triangles."""
    e = np.asarray(extents, dtype=np.float64) * 0.5
    c = np.asarray(center, dtype=np.float64)
    verts = np.array(
        [
            [-1, -1, -1], [1, -1, -1], [1, 1, -1], [-1, 1, -1],
            [-1, -1, 1], [1, -1, 1], [1, 1, 1], [-1, 1, 1],
        ],
        dtype=np.float64,
    )
    return TriangleMesh(verts * e + c, np.asarray(_CUBE_FACES, dtype=np.int64))


def unit_cube() -> TriangleMesh:
    """Axis-aligned cube of side 1 centered at the origin."""
    return box((1.0, 1.0, 1.0))


def icosphere(radius: float = 1.0, subdivisions: int = 3, center=(0.0, 0.0, 0.0)) -> TriangleMesh:
    """Geodesic sphere from a subdivided icosahedron (20 * 4^n faces)."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.asarray(v, dtype=np.float64) for v in verts]

    def midpoint(cache, i, j):
        key = (i, j) if i < j else (j, i)
        if key not in cache:
            verts.append((verts[i] + verts[j]) * 0.5)
            cache[key] = len(verts) - 1
        return cache[key]

    for _ in range(subdivisions):
        cache = {}
        next_faces = []
        for a, b, c in faces:
            ab = midpoint(cache, a, b)
            bc = midpoint(cache, b, c)
            ca = midpoint(cache, c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces

    pts = np.asarray(verts)
    pts = pts / np.linalg.norm(pts, axis=1)[:, None] * radius + np.asarray(center, dtype=np.float64)
    return TriangleMesh(pts, np.asarray(faces, dtype=np.int64))


def flat_square(side: float = 1.0) -> TriangleMesh:
    """Open two-triangle square in the z = 0 plane, centered at the origin."""
    h = side * 0.5
    verts = np.array([[-h, -h, 0], [h, -h, 0], [h, h, 0], [-h, h, 0]], dtype=np.float64)
    return TriangleMesh(verts, np.array([[0, 1, 2], [0, 2, 3]], dtype=np.int64))
