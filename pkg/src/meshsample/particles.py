"""Particle set container shared by the samplers, exporters, and checkers."""

from __future__ import annotations

import numpy as np

KIND_SURFACE = "surface"
KIND_VOLUME_GRID = "volumeGrid"
KIND_VOLUME_RANDOM = "volumeRandom"
KIND_UNKNOWN = "unknown"

KINDS = (KIND_SURFACE, KIND_VOLUME_GRID, KIND_VOLUME_RANDOM, KIND_UNKNOWN)


class ParticleSet:
    """Ordered particle positions plus the spacing they were generated under.

    ``spacing`` is the surface min-distance d or the volume diameter 2r;
    ``None`` for imports that carry no metadata.
    """

    __slots__ = ("positions", "spacing", "kind")

    def __init__(self, positions, spacing=None, kind=KIND_UNKNOWN):
        pos = np.ascontiguousarray(positions, dtype=np.float64).reshape(-1, 3)
        pos.setflags(write=False)
        if kind not in KINDS:
            raise ValueError(f"unknown particle kind {kind!r}")
        self.positions = pos
        self.spacing = None if spacing is None else float(spacing)
        self.kind = kind

    def __len__(self) -> int:
        return len(self.positions)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParticleSet):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.spacing == other.spacing
            and self.positions.shape == other.positions.shape
            and bool(np.all(self.positions == other.positions))
        )

    def __repr__(self) -> str:
        return f"ParticleSet({len(self)} particles, kind={self.kind}, spacing={self.spacing})"
