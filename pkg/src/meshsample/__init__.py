"""Surface and volume mesh sampling for particle-based simulation.

Load a closed triangle mesh, produce Poisson-disk surface samplings or
grid/random volume samplings, verify their spacing guarantees, and export
them in documented formats. The same functionality is exposed through the
``meshsample`` CLI and an HTTP service for the browser viewer.
"""

from .errors import (
    DegenerateMeshError,
    EmptyMeshError,
    EmptySetError,
    EmptyVolumeError,
    InvalidScaleError,
    MeshSampleError,
    NonManifoldError,
    OpenMeshError,
    OutOfBoundsError,
    OutOfDomainError,
    ParseError,
    TooFewParticlesError,
    UsageError,
)
from .geometry import (
    Aabb,
    TriangleMesh,
    load_mesh,
    load_mesh_bytes,
    normalize_mesh,
    random_surface_point,
    random_surface_points,
    save_mesh,
    scale_mesh,
)
from .grid import CellGrid, HashGrid, build_hash_grid, spatial_hash
from .particle_io import export_particles, import_particles
from .particles import ParticleSet
from .quality import QualityReport, verify_inside, verify_min_distance, verify_on_surface
from .sdf import SignedDistanceField, build_sdf
from .surface import CandidatePoint, SurfaceSamplingConfig, sample_surface
from .volume import (
    VolumeSamplingConfig,
    nearest_neighbor_stats,
    sample_volume,
    sample_volume_grid,
    sample_volume_random,
)

__version__ = "0.1.0"

__all__ = [
    "Aabb",
    "CandidatePoint",
    "CellGrid",
    "DegenerateMeshError",
    "EmptyMeshError",
    "EmptySetError",
    "EmptyVolumeError",
    "HashGrid",
    "InvalidScaleError",
    "MeshSampleError",
    "NonManifoldError",
    "OpenMeshError",
    "OutOfBoundsError",
    "OutOfDomainError",
    "ParseError",
    "ParticleSet",
    "QualityReport",
    "SignedDistanceField",
    "SurfaceSamplingConfig",
    "TooFewParticlesError",
    "TriangleMesh",
    "UsageError",
    "VolumeSamplingConfig",
    "build_hash_grid",
    "build_sdf",
    "export_particles",
    "import_particles",
    "load_mesh",
    "load_mesh_bytes",
    "nearest_neighbor_stats",
    "normalize_mesh",
    "random_surface_point",
    "random_surface_points",
    "sample_surface",
    "sample_volume",
    "sample_volume_grid",
    "sample_volume_random",
    "save_mesh",
    "scale_mesh",
    "spatial_hash",
    "verify_inside",
    "verify_min_distance",
    "verify_on_surface",
]
