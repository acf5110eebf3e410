"""Volume sampling of closed meshes: deterministic lattice and randomized blue noise.

Grid mode drops a particle at every lattice cell center whose signed distance
is negative. Random mode rejection-samples candidates inside the volume and
feeds them through the same trial loop as the surface sampler with the
particle diameter as the minimum distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyVolumeError, TooFewParticlesError
from .geometry import TriangleMesh
from .grid import CellGrid, build_hash_grid
from .particles import KIND_VOLUME_GRID, KIND_VOLUME_RANDOM, ParticleSet
from .sdf import DEFAULT_RESOLUTION, build_sdf
from .surface import _run_trials

MODE_GRID = "grid"
MODE_RANDOM = "random"
MODES = (MODE_GRID, MODE_RANDOM)

_BATCH = 1 << 18  # rejection-sampling draw batch


@dataclass
class VolumeSamplingConfig:
    """Parameters of the volume samplers.

    ``radius`` is the particle radius r; particles end up at least 2r apart.
    ``density`` is the random-mode candidate multiplier per grid cell and
    defaults to the trial count. ``margin`` keeps particle centers at least
    that depth behind the surface; the default 0 admits every center with a
    negative signed distance, while margin=r makes whole particle spheres fit
    inside the volume. ``invert`` samples the padded box outside the mesh.
    """

    radius: float
    mode: str = MODE_GRID
    invert: bool = False
    sdf_resolution: int = DEFAULT_RESOLUTION
    density: float | None = None
    trials: int = 10
    margin: float = 0.0
    seed: int = 0

    def validate(self):
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sdf_resolution < 2:
            raise ValueError("sdf_resolution must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.density is not None and not (self.density > 0.0):
            raise ValueError("density must be positive")
        if self.margin < 0.0:
            raise ValueError("margin must be nonnegative")

    @property
    def rho(self) -> float:
        return float(self.trials) if self.density is None else float(self.density)


def sampling_cell_side(cfg: VolumeSamplingConfig) -> float:
    """Lattice pitch 2r in grid mode; 2r/sqrt(3) (diagonal 2r) in random mode."""
    if cfg.mode == MODE_GRID:
        return 2.0 * cfg.radius
    return 2.0 * cfg.radius / math.sqrt(3.0)


def sdf_padding(cfg: VolumeSamplingConfig) -> float:
    """Two sampling-cell diagonals: the margin the SDF domain adds around the
    mesh AABB, and the width of the inverted sampling shell."""
    return 2.0 * sampling_cell_side(cfg) * math.sqrt(3.0)


def _sampling_setup(mesh: TriangleMesh, cfg: VolumeSamplingConfig, cell_side: float):
    """Sampling grid and SDF shared by both modes.

    The sampling domain is the tight mesh AABB; inverted sampling widens it by
    two sampling-cell diagonals so there is room between mesh and box. The SDF
    always covers the widened box so no query leaves its domain.
    """
    pad = sdf_padding(cfg) if cfg.invert else 0.0
    grid = CellGrid.cover(mesh.aabb, cell_side, pad=pad)
    field = build_sdf(mesh, resolution=cfg.sdf_resolution, padding=sdf_padding(cfg))
    return grid, field


def _keep_mask(values: np.ndarray, cfg: VolumeSamplingConfig) -> np.ndarray:
    if cfg.invert:
        return values > cfg.margin
    return values < -cfg.margin


def sample_volume_grid(mesh: TriangleMesh, cfg: VolumeSamplingConfig) -> ParticleSet:
    """Particles at the centers of all lattice cells (side 2r) inside the volume.

    Deterministic and lattice-aligned: every position is exactly
    origin + (i + 1/2, j + 1/2, k + 1/2) * 2r.
    """
    cfg.validate()
    cell = 2.0 * cfg.radius
    grid, field = _sampling_setup(mesh, cfg, cell)

    ijk = grid.unflatten(np.arange(grid.cell_count))  # ascending flat cell id
    centers = grid.origin + (ijk + 0.5) * cell

    values = field.query_many(centers, out_of_domain="outside")
    keep = _keep_mask(values, cfg)
    if cfg.invert:
        # the covering lattice may overhang the padded box; stay inside it
        box = mesh.aabb.expanded(sdf_padding(cfg))
        keep &= box.contains(centers)
    return ParticleSet(centers[keep], spacing=cell, kind=KIND_VOLUME_GRID)


def sample_volume_random(mesh: TriangleMesh, cfg: VolumeSamplingConfig) -> ParticleSet:
    """Blue-noise volume sampling: uniform in-volume candidates, then the
    surface sampler's trial loop with Euclidean norm and min distance 2r.

    The candidate quota is density * N kept candidates, N being the total
    cell count of the bounding-box grid with side 2r/sqrt(3); drawing stops
    early after 100x that many attempts (EmptyVolumeError if none landed
    inside at all).
    """
    cfg.validate()
    min_dist = 2.0 * cfg.radius
    cell = min_dist / math.sqrt(3.0)
    grid, field = _sampling_setup(mesh, cfg, cell)

    n_cells = grid.cell_count
    quota = max(1, math.floor(cfg.rho * n_cells))
    attempts_cap = 100 * quota

    # candidates are drawn over the sampling domain box itself; the covering
    # grid may overhang it by a fraction of a cell
    domain = mesh.aabb.expanded(sdf_padding(cfg)) if cfg.invert else mesh.aabb
    lo = domain.min
    hi = domain.max
    rng = np.random.default_rng(cfg.seed)
    kept = []
    kept_total = 0
    attempts = 0
    while kept_total < quota and attempts < attempts_cap:
        n = min(_BATCH, attempts_cap - attempts)
        pts = rng.uniform(size=(n, 3)) * (hi - lo) + lo
        attempts += n
        values = field.query_many(pts, out_of_domain="outside")
        good = pts[_keep_mask(values, cfg)]
        if len(good):
            if kept_total + len(good) > quota:
                good = good[: quota - kept_total]
            kept.append(good)
            kept_total += len(good)
    if kept_total == 0:
        raise EmptyVolumeError(
            f"no candidate inside the target volume after {attempts} attempts"
        )
    candidates = np.vstack(kept)

    hg = build_hash_grid(grid, candidates)
    accepted = _run_trials(hg, min_dist, cfg.trials, use_geodesic=False)
    return ParticleSet(hg.positions[accepted], spacing=min_dist, kind=KIND_VOLUME_RANDOM)


def sample_volume(mesh: TriangleMesh, cfg: VolumeSamplingConfig) -> ParticleSet:
    """Dispatch on ``cfg.mode``."""
    cfg.validate()
    if cfg.mode == MODE_GRID:
        return sample_volume_grid(mesh, cfg)
    return sample_volume_random(mesh, cfg)


def nearest_neighbor_stats(ps: ParticleSet) -> tuple[float, float, float]:
    """(min, mean, max) of the nearest-neighbor distances of the set."""
    if len(ps) < 2:
        raise TooFewParticlesError("need at least 2 particles for neighbor statistics")
    from scipy.spatial import cKDTree

    tree = cKDTree(ps.positions)
    dist, _ = tree.query(ps.positions, k=2)
    nn = dist[:, 1]
    return float(nn.min()), float(nn.mean()), float(nn.max())
