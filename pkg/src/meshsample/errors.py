"""Exception types shared across the toolkit."""


class MeshSampleError(Exception):
    """Base class for all toolkit errors."""


class ParseError(MeshSampleError):
    """A mesh or particle file could not be parsed."""


class EmptyMeshError(MeshSampleError):
    """The mesh contains no triangles."""


class DegenerateMeshError(MeshSampleError):
    """The mesh has zero extent or zero total area where positive is required."""


class InvalidScaleError(MeshSampleError):
    """A per-axis scale factor is zero or negative."""


class OutOfBoundsError(MeshSampleError):
    """A point lies outside the covered grid domain."""


class OpenMeshError(MeshSampleError):
    """The mesh has boundary edges and cannot bound a volume."""


class NonManifoldError(MeshSampleError):
    """An edge is shared by more than two triangles."""


class OutOfDomainError(MeshSampleError):
    """A query point lies outside the signed distance field domain."""


class EmptyVolumeError(MeshSampleError):
    """Rejection sampling found no point inside the volume within the attempt cap."""


class TooFewParticlesError(MeshSampleError):
    """An operation needs more particles than the set contains."""


class EmptySetError(MeshSampleError):
    """Export was asked to write an empty particle set."""


class UsageError(MeshSampleError):
    """Command line arguments are malformed or incomplete."""
