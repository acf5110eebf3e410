"""Uniform cell grid over an AABB and an xor-hash table of occupied cells.

The hash table maps occupied cells to their contiguous run in a cell-sorted
candidate array plus an optional accepted sample, which is exactly the state
the dart-throwing samplers need: at most one sample ever lives in a cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfBoundsError
from .geometry import Aabb

HASH_P1 = 73856093
HASH_P2 = 19349663
HASH_P3 = 83492791

_U64 = (1 << 64) - 1

# Points this far outside the covered box are clamped into the boundary cell
# instead of rejected.
CLAMP_TOL = 1e-9


def spatial_hash(i: int, j: int, k: int, table_size: int) -> int:
    """Bucket index of cell (i, j, k): xor of prime-multiplied indices mod table size.

    Products wrap in unsigned 64-bit arithmetic; negative indices are
    reinterpreted as two's complement.
    """
    if table_size <= 0:
        raise ValueError("table_size must be positive")
    h = ((i * HASH_P1) & _U64) ^ ((j * HASH_P2) & _U64) ^ ((k * HASH_P3) & _U64)
    return int(h % table_size)


def spatial_hash_array(ijk: np.ndarray, table_size: int) -> np.ndarray:
    """Vectorized :func:`spatial_hash` for an (N, 3) index array."""
    if table_size <= 0:
        raise ValueError("table_size must be positive")
    ijk = np.asarray(ijk)
    with np.errstate(over="ignore"):
        h = (
            (ijk[:, 0].astype(np.int64).astype(np.uint64) * np.uint64(HASH_P1))
            ^ (ijk[:, 1].astype(np.int64).astype(np.uint64) * np.uint64(HASH_P2))
            ^ (ijk[:, 2].astype(np.int64).astype(np.uint64) * np.uint64(HASH_P3))
        )
    return (h % np.uint64(table_size)).astype(np.int64)


@dataclass(frozen=True)
class CellGrid:
    """Uniform grid of ``dims`` cells of side ``cell_side`` starting at ``origin``."""

    origin: np.ndarray
    cell_side: float
    dims: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=np.float64).reshape(3))
        object.__setattr__(self, "dims", np.asarray(self.dims, dtype=np.int64).reshape(3))
        if self.cell_side <= 0.0:
            raise ValueError("cell_side must be positive")
        if np.any(self.dims < 1):
            raise ValueError("dims must be at least 1 per axis")

    @classmethod
    def cover(cls, aabb: Aabb, cell_side: float, pad: float = 0.0) -> "CellGrid":
        """Smallest grid covering ``aabb`` expanded by ``pad``, centered on it.

        The integer cell counts overhang the box by less than one cell per
        axis; the overhang is split evenly so a box symmetric about its center
        keeps that symmetry in the cell lattice.
        """
        lo = aabb.min - pad
        hi = aabb.max + pad
        extent = hi - lo
        dims = np.maximum(1, np.ceil(extent / cell_side).astype(np.int64))
        center = (lo + hi) * 0.5
        origin = center - dims * (cell_side * 0.5)
        return cls(origin=origin, cell_side=float(cell_side), dims=dims)

    @property
    def max_corner(self) -> np.ndarray:
        return self.origin + self.dims * self.cell_side

    @property
    def cell_count(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_diagonal(self) -> float:
        return float(np.sqrt(3.0) * self.cell_side)

    def cell_of(self, p) -> tuple[int, int, int]:
        """Cell indices of point ``p``; min faces closed, covered max face clamped."""
        ijk = self.cells_of(np.asarray(p, dtype=np.float64).reshape(1, 3))[0]
        return (int(ijk[0]), int(ijk[1]), int(ijk[2]))

    def cells_of(self, points: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`cell_of`; raises OutOfBoundsError beyond the clamp tolerance."""
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        lo_ok = pts >= self.origin - CLAMP_TOL
        hi_ok = pts <= self.max_corner + CLAMP_TOL
        if not (lo_ok.all() and hi_ok.all()):
            bad = int(np.nonzero(~(lo_ok.all(axis=1) & hi_ok.all(axis=1)))[0][0])
            raise OutOfBoundsError(
                f"point {pts[bad].tolist()} outside grid [{self.origin.tolist()}, "
                f"{self.max_corner.tolist()}]"
            )
        rel = (pts - self.origin) / self.cell_side
        ijk = np.floor(rel).astype(np.int64)
        np.clip(ijk, 0, self.dims - 1, out=ijk)
        return ijk

    def flat_ids(self, ijk: np.ndarray) -> np.ndarray:
        """Row-major flat id i + dims_x * (j + dims_y * k)."""
        ijk = np.asarray(ijk, dtype=np.int64)
        if ijk.ndim == 1:
            ijk = ijk.reshape(1, 3)
        return ijk[:, 0] + self.dims[0] * (ijk[:, 1] + self.dims[1] * ijk[:, 2])

    def flat_id(self, ijk) -> int:
        return int(self.flat_ids(np.asarray(ijk))[0])

    def unflatten(self, flat: np.ndarray) -> np.ndarray:
        flat = np.asarray(flat, dtype=np.int64)
        i = flat % self.dims[0]
        j = (flat // self.dims[0]) % self.dims[1]
        k = flat // (self.dims[0] * self.dims[1])
        return np.stack([i, j, k], axis=-1)

    def cell_centers(self, ijk: np.ndarray) -> np.ndarray:
        ijk = np.asarray(ijk, dtype=np.float64)
        return self.origin + (ijk + 0.5) * self.cell_side


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@dataclass
class HashGrid:
    """Occupied-cell hash table over a cell-sorted candidate array.

    Entries are stored sorted by flat cell id (the samplers iterate them in
    that order); ``bucket_offsets``/``bucket_entries`` overlay the xor-hash
    buckets as a CSR index into the entry arrays. ``entry_sample`` holds the
    index (into ``positions``) of the accepted sample per cell, or -1.
    """

    grid: CellGrid
    table_size: int
    positions: np.ndarray      # (N, 3) candidates, stably sorted by flat cell id
    payload: np.ndarray | None  # optional per-candidate data, sorted alongside
    source_index: np.ndarray   # (N,) original candidate index per sorted slot
    entry_cell_id: np.ndarray  # (K,)
    entry_ijk: np.ndarray      # (K, 3)
    entry_start: np.ndarray    # (K,)
    entry_count: np.ndarray    # (K,)
    entry_sample: np.ndarray = field(repr=False, default=None)
    bucket_offsets: np.ndarray = field(repr=False, default=None)
    bucket_entries: np.ndarray = field(repr=False, default=None)

    @property
    def entry_count_total(self) -> int:
        return len(self.entry_cell_id)

    def find_entry(self, ijk) -> int:
        """Entry index of cell ``ijk`` via the hash table, or -1 if unoccupied."""
        i, j, k = int(ijk[0]), int(ijk[1]), int(ijk[2])
        cid = i + int(self.grid.dims[0]) * (j + int(self.grid.dims[1]) * k)
        b = spatial_hash(i, j, k, self.table_size)
        for t in range(self.bucket_offsets[b], self.bucket_offsets[b + 1]):
            e = int(self.bucket_entries[t])
            if self.entry_cell_id[e] == cid:
                return e
        return -1

    def neighbor_entries(self, ijk, ring: int) -> list[int]:
        """Entry indices of all occupied cells within Chebyshev ``ring`` of ``ijk``.

        Includes the center cell; offsets falling outside the grid are skipped.
        """
        if ring < 1:
            raise ValueError("ring must be at least 1")
        ci, cj, ck = int(ijk[0]), int(ijk[1]), int(ijk[2])
        dims = self.grid.dims
        out = []
        for dk in range(-ring, ring + 1):
            nk = ck + dk
            if nk < 0 or nk >= dims[2]:
                continue
            for dj in range(-ring, ring + 1):
                nj = cj + dj
                if nj < 0 or nj >= dims[1]:
                    continue
                for di in range(-ring, ring + 1):
                    ni = ci + di
                    if ni < 0 or ni >= dims[0]:
                        continue
                    e = self.find_entry((ni, nj, nk))
                    if e >= 0:
                        out.append(e)
        return out

    def candidates_of(self, entry: int) -> np.ndarray:
        s = int(self.entry_start[entry])
        return self.positions[s : s + int(self.entry_count[entry])]

    def accepted_positions(self) -> np.ndarray:
        idx = self.entry_sample[self.entry_sample >= 0]
        return self.positions[idx]


def build_hash_grid(
    grid: CellGrid,
    positions: np.ndarray,
    payload: np.ndarray | None = None,
    table_size: int | None = None,
) -> HashGrid:
    """Sort candidates by flat cell id and index the occupied cells by xor hash.

    The sort is stable, so candidates sharing a cell keep their original
    relative order; that order defines which candidate is "the t-th" during
    sampling trials. ``table_size`` defaults to the next power of two at or
    above twice the occupied-cell count.
    """
    positions = np.ascontiguousarray(positions, dtype=np.float64).reshape(-1, 3)
    n = len(positions)
    if n:
        ijk = grid.cells_of(positions)
        flat = grid.flat_ids(ijk)
        order = np.argsort(flat, kind="stable")
        sorted_flat = flat[order]
        sorted_pos = positions[order]
        sorted_payload = payload[order] if payload is not None else None
        cell_ids, starts, counts = np.unique(sorted_flat, return_index=True, return_counts=True)
    else:
        order = np.empty(0, dtype=np.int64)
        sorted_pos = positions
        sorted_payload = payload
        cell_ids = np.empty(0, dtype=np.int64)
        starts = np.empty(0, dtype=np.int64)
        counts = np.empty(0, dtype=np.int64)

    k = len(cell_ids)
    if table_size is None:
        table_size = _next_pow2(max(1, 2 * k))
    if table_size <= 0:
        raise ValueError("table_size must be positive")

    entry_ijk = grid.unflatten(cell_ids).astype(np.int64) if k else np.empty((0, 3), dtype=np.int64)
    buckets = spatial_hash_array(entry_ijk, table_size) if k else np.empty(0, dtype=np.int64)
    bucket_offsets = np.zeros(table_size + 1, dtype=np.int64)
    if k:
        np.add.at(bucket_offsets, buckets + 1, 1)
        np.cumsum(bucket_offsets, out=bucket_offsets)
        bucket_entries = np.argsort(buckets, kind="stable").astype(np.int64)
    else:
        bucket_entries = np.empty(0, dtype=np.int64)

    return HashGrid(
        grid=grid,
        table_size=int(table_size),
        positions=sorted_pos,
        payload=sorted_payload,
        source_index=order,
        entry_cell_id=cell_ids.astype(np.int64),
        entry_ijk=entry_ijk,
        entry_start=starts.astype(np.int64),
        entry_count=counts.astype(np.int64),
        entry_sample=np.full(k, -1, dtype=np.int64),
        bucket_offsets=bucket_offsets,
        bucket_entries=bucket_entries,
    )
