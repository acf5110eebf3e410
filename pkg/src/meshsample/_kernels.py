"""Compiled inner loops for the samplers and the signed distance field.

Everything here operates on plain numpy arrays so the numba-compiled and
pure-Python paths share one implementation; when numba is unavailable the
functions run untranslated (slow but identical semantics).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    NUMBA_AVAILABLE = False
    prange = range

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


HASH_P1 = 73856093
HASH_P2 = 19349663
HASH_P3 = 83492791

_BARY_EPS = 1e-10  # barycentric closeness to a hit-decision boundary


@njit(cache=True)
def find_entry(i, j, k, d0, d1, table_size, bucket_offsets, bucket_entries, entry_cell_id):
    """Hash-table lookup of the entry index for cell (i, j, k); -1 if unoccupied."""
    cid = i + d0 * (j + d1 * k)
    h = (
        (np.uint64(i) * np.uint64(HASH_P1))
        ^ (np.uint64(j) * np.uint64(HASH_P2))
        ^ (np.uint64(k) * np.uint64(HASH_P3))
    )
    b = np.int64(h % np.uint64(table_size))
    for t in range(bucket_offsets[b], bucket_offsets[b + 1]):
        e = bucket_entries[t]
        if entry_cell_id[e] == cid:
            return e
    return np.int64(-1)


@njit(cache=True)
def pair_distance(px, py, pz, qx, qy, qz, nax, nay, naz, nbx, nby, nbz, use_geodesic):
    """Euclidean chord length, optionally inflated by the mean-normal correction.

    The geodesic approximation divides the chord by the cosine of its angle to
    the mean tangent plane; the correction factor is capped via the 0.95 clamp.
    """
    dx = qx - px
    dy = qy - py
    dz = qz - pz
    dist = np.sqrt(dx * dx + dy * dy + dz * dz)
    if not use_geodesic or dist == 0.0:
        return dist
    mx = nax + nbx
    my = nay + nby
    mz = naz + nbz
    mlen = np.sqrt(mx * mx + my * my + mz * mz)
    if mlen < 1e-12:
        return dist
    s = abs((dx * mx + dy * my + dz * mz) / (dist * mlen))
    if s > 0.95:
        s = 0.95
    return dist / np.sqrt(1.0 - s * s)


@njit(cache=True)
def poisson_trial_loop(
    pos,
    nrm,
    use_geodesic,
    entry_ijk,
    entry_start,
    entry_count,
    entry_sample,
    bucket_offsets,
    bucket_entries,
    entry_cell_id,
    dims,
    table_size,
    min_dist,
    trials,
    ring,
    out_idx,
):
    """Sequential trial loop of the cell-based dart thrower.

    For each trial t, every still-unsampled occupied cell (ascending flat cell
    id) tests its t-th candidate against accepted samples in the Chebyshev
    ``ring`` neighborhood and accepts it when no neighbor is closer than
    ``min_dist``. Accepted candidate indices are recorded in acceptance order
    in ``out_idx``; returns the number accepted.
    """
    n_entries = entry_ijk.shape[0]
    d0 = dims[0]
    d1 = dims[1]
    d2 = dims[2]
    nacc = 0
    for t in range(1, trials + 1):
        for e in range(n_entries):
            if entry_sample[e] >= 0:
                continue
            if entry_count[e] < t:
                continue
            ci = entry_start[e] + t - 1
            px = pos[ci, 0]
            py = pos[ci, 1]
            pz = pos[ci, 2]
            ei = entry_ijk[e, 0]
            ej = entry_ijk[e, 1]
            ek = entry_ijk[e, 2]
            conflict = False
            for dk in range(-ring, ring + 1):
                nk = ek + dk
                if nk < 0 or nk >= d2:
                    continue
                for dj in range(-ring, ring + 1):
                    nj = ej + dj
                    if nj < 0 or nj >= d1:
                        continue
                    for di in range(-ring, ring + 1):
                        ni = ei + di
                        if ni < 0 or ni >= d0:
                            continue
                        ne = find_entry(
                            ni, nj, nk, d0, d1, table_size,
                            bucket_offsets, bucket_entries, entry_cell_id,
                        )
                        if ne < 0:
                            continue
                        si = entry_sample[ne]
                        if si < 0:
                            continue
                        dist = pair_distance(
                            px, py, pz,
                            pos[si, 0], pos[si, 1], pos[si, 2],
                            nrm[ci, 0], nrm[ci, 1], nrm[ci, 2],
                            nrm[si, 0], nrm[si, 1], nrm[si, 2],
                            use_geodesic,
                        )
                        if dist < min_dist:
                            conflict = True
                            break
                    if conflict:
                        break
                if conflict:
                    break
            if not conflict:
                entry_sample[e] = ci
                out_idx[nacc] = ci
                nacc += 1
    return nacc


# ---------------------------------------------------------------------------
# Exact point-triangle distance (closest-point region classification)
# ---------------------------------------------------------------------------


@njit(cache=True)
def point_tri_dist2(px, py, pz, ax, ay, az, bx, by, bz, cx, cy, cz):
    abx = bx - ax
    aby = by - ay
    abz = bz - az
    acx = cx - ax
    acy = cy - ay
    acz = cz - az
    apx = px - ax
    apy = py - ay
    apz = pz - az

    d1 = abx * apx + aby * apy + abz * apz
    d2 = acx * apx + acy * apy + acz * apz
    if d1 <= 0.0 and d2 <= 0.0:
        return apx * apx + apy * apy + apz * apz

    bpx = px - bx
    bpy = py - by
    bpz = pz - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        return bpx * bpx + bpy * bpy + bpz * bpz

    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        w = d1 / (d1 - d3)
        qx = apx - w * abx
        qy = apy - w * aby
        qz = apz - w * abz
        return qx * qx + qy * qy + qz * qz

    cpx = px - cx
    cpy = py - cy
    cpz = pz - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        return cpx * cpx + cpy * cpy + cpz * cpz

    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        qx = apx - w * acx
        qy = apy - w * acy
        qz = apz - w * acz
        return qx * qx + qy * qy + qz * qz

    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        qx = bpx - w * (cx - bx)
        qy = bpy - w * (cy - by)
        qz = bpz - w * (cz - bz)
        return qx * qx + qy * qy + qz * qz

    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    qx = apx - (abx * v + acx * w)
    qy = apy - (aby * v + acy * w)
    qz = apz - (abz * v + acz * w)
    return qx * qx + qy * qy + qz * qz


# ---------------------------------------------------------------------------
# CSR builders for triangle buckets
# ---------------------------------------------------------------------------


@njit(cache=True)
def build_rect_csr(lo0, hi0, lo1, hi1, n0, n1):
    """CSR of triangle ids per 2D column; triangle t covers the inclusive
    index rectangle [lo0..hi0] x [lo1..hi1]."""
    ncol = n0 * n1
    offsets = np.zeros(ncol + 1, dtype=np.int64)
    nt = lo0.shape[0]
    for t in range(nt):
        for q in range(lo1[t], hi1[t] + 1):
            base = n0 * q
            for p in range(lo0[t], hi0[t] + 1):
                offsets[base + p + 1] += 1
    for c in range(ncol):
        offsets[c + 1] += offsets[c]
    ids = np.empty(offsets[ncol], dtype=np.int64)
    cursor = offsets[:ncol].copy()
    for t in range(nt):
        for q in range(lo1[t], hi1[t] + 1):
            base = n0 * q
            for p in range(lo0[t], hi0[t] + 1):
                c = base + p
                ids[cursor[c]] = t
                cursor[c] += 1
    return offsets, ids


@njit(cache=True)
def build_box_csr(lo, hi, dims):
    """CSR of triangle ids per 3D cell; triangle t covers the inclusive index
    box lo[t]..hi[t]."""
    ncell = dims[0] * dims[1] * dims[2]
    offsets = np.zeros(ncell + 1, dtype=np.int64)
    nt = lo.shape[0]
    for t in range(nt):
        for k in range(lo[t, 2], hi[t, 2] + 1):
            for j in range(lo[t, 1], hi[t, 1] + 1):
                base = dims[0] * (j + dims[1] * k)
                for i in range(lo[t, 0], hi[t, 0] + 1):
                    offsets[base + i + 1] += 1
    for c in range(ncell):
        offsets[c + 1] += offsets[c]
    ids = np.empty(offsets[ncell], dtype=np.int64)
    cursor = offsets[:ncell].copy()
    for t in range(nt):
        for k in range(lo[t, 2], hi[t, 2] + 1):
            for j in range(lo[t, 1], hi[t, 1] + 1):
                base = dims[0] * (j + dims[1] * k)
                for i in range(lo[t, 0], hi[t, 0] + 1):
                    c = base + i
                    ids[cursor[c]] = t
                    cursor[c] += 1
    return offsets, ids


# ---------------------------------------------------------------------------
# Inside/outside classification
# ---------------------------------------------------------------------------


@njit(cache=True)
def _parity_axis(px, py, pz, a0, a1, a2, ta, tb, tc, ids, s, e, eps_t):
    """Crossing parity of the +axis ray against the listed triangles.

    Returns (crossings, certain); the cast is uncertain when any hit decision
    came within epsilon of a triangle edge, vertex, or the ray origin.
    """
    crossings = 0
    certain = True
    if a0 == 0:
        p0, p1, p2 = px, py, pz
    elif a0 == 1:
        p0, p1, p2 = py, pz, px
    else:
        p0, p1, p2 = pz, px, py
    for n in range(s, e):
        t = ids[n]
        a_0 = ta[t, a0]
        a_1 = ta[t, a1]
        a_2 = ta[t, a2]
        e1_0 = tb[t, a0] - a_0
        e1_1 = tb[t, a1] - a_1
        e1_2 = tb[t, a2] - a_2
        e2_0 = tc[t, a0] - a_0
        e2_1 = tc[t, a1] - a_1
        e2_2 = tc[t, a2] - a_2
        t_0 = p0 - a_0
        t_1 = p1 - a_1
        t_2 = p2 - a_2

        det = e1_2 * e2_1 - e1_1 * e2_2
        l1 = e1_0 * e1_0 + e1_1 * e1_1 + e1_2 * e1_2
        l2 = e2_0 * e2_0 + e2_1 * e2_1 + e2_2 * e2_2
        lmax = l1 if l1 > l2 else l2
        if abs(det) <= 1e-14 * lmax:
            # Ray parallel to the triangle plane: only a problem if it grazes it.
            n_0 = e1_1 * e2_2 - e1_2 * e2_1
            n_1 = e1_2 * e2_0 - e1_0 * e2_2
            n_2 = e1_0 * e2_1 - e1_1 * e2_0
            nn = np.sqrt(n_0 * n_0 + n_1 * n_1 + n_2 * n_2)
            if nn > 0.0:
                dplane = abs(t_0 * n_0 + t_1 * n_1 + t_2 * n_2) / nn
                lo1 = min(a_1, min(a_1 + e1_1, a_1 + e2_1))
                hi1 = max(a_1, max(a_1 + e1_1, a_1 + e2_1))
                lo2 = min(a_2, min(a_2 + e1_2, a_2 + e2_2))
                hi2 = max(a_2, max(a_2 + e1_2, a_2 + e2_2))
                if (
                    dplane <= eps_t
                    and lo1 - eps_t <= p1 <= hi1 + eps_t
                    and lo2 - eps_t <= p2 <= hi2 + eps_t
                ):
                    certain = False
            continue
        invdet = 1.0 / det
        u = (t_2 * e2_1 - t_1 * e2_2) * invdet
        q_0 = t_1 * e1_2 - t_2 * e1_1
        q_1 = t_2 * e1_0 - t_0 * e1_2
        q_2 = t_0 * e1_1 - t_1 * e1_0
        v = q_0 * invdet
        tt = (e2_0 * q_0 + e2_1 * q_1 + e2_2 * q_2) * invdet
        if (
            abs(u) <= _BARY_EPS
            or abs(v) <= _BARY_EPS
            or abs(1.0 - u - v) <= _BARY_EPS
            or abs(tt) <= eps_t
        ):
            certain = False
        if tt > 0.0 and u >= 0.0 and v >= 0.0 and u + v <= 1.0:
            crossings += 1
    return crossings, certain


@njit(cache=True)
def _sign_of(x):
    if x > 0.0:
        return 1
    if x < 0.0:
        return -1
    return 0


@njit(cache=True)
def _winding2(px, py, pz, ta, tb, tc):
    """Twice the winding number of the closed surface around p via exact sign
    tests on vertices, edges, and faces. ok=False means p lies on the surface."""
    total = 0
    for t in range(ta.shape[0]):
        v1x = ta[t, 0] - px
        v1y = ta[t, 1] - py
        v1z = ta[t, 2] - pz
        v2x = tb[t, 0] - px
        v2y = tb[t, 1] - py
        v2z = tb[t, 2] - pz
        v3x = tc[t, 0] - px
        v3y = tc[t, 1] - py
        v3z = tc[t, 2] - pz

        s1 = _sign_of(v1x)
        if s1 == 0:
            s1 = _sign_of(v1y)
        if s1 == 0:
            s1 = _sign_of(v1z)
        if s1 == 0:
            return 0, False
        s2 = _sign_of(v2x)
        if s2 == 0:
            s2 = _sign_of(v2y)
        if s2 == 0:
            s2 = _sign_of(v2z)
        if s2 == 0:
            return 0, False
        s3 = _sign_of(v3x)
        if s3 == 0:
            s3 = _sign_of(v3y)
        if s3 == 0:
            s3 = _sign_of(v3z)
        if s3 == 0:
            return 0, False

        boundary = 0
        if s1 != s2:
            es = _sign_of(v1y * v2x - v1x * v2y)
            if es == 0:
                es = _sign_of(v1z * v2x - v1x * v2z)
            if es == 0:
                es = _sign_of(v1z * v2y - v1y * v2z)
            if es == 0:
                return 0, False
            boundary += es
        if s2 != s3:
            es = _sign_of(v2y * v3x - v2x * v3y)
            if es == 0:
                es = _sign_of(v2z * v3x - v2x * v3z)
            if es == 0:
                es = _sign_of(v2z * v3y - v2y * v3z)
            if es == 0:
                return 0, False
            boundary += es
        if s3 != s1:
            es = _sign_of(v3y * v1x - v3x * v1y)
            if es == 0:
                es = _sign_of(v3z * v1x - v3x * v1z)
            if es == 0:
                es = _sign_of(v3z * v1y - v3y * v1z)
            if es == 0:
                return 0, False
            boundary += es
        if boundary == 0:
            continue
        ts = _sign_of(
            (v1x * v2y - v1y * v2x) * v3z
            + (v2x * v3y - v2y * v3x) * v1z
            + (v3x * v1y - v3y * v1x) * v2z
        )
        if ts == 0:
            return 0, False
        total += ts
    return total, True


@njit(cache=True)
def inside_sign(
    px, py, pz,
    ta, tb, tc,
    bmin, bmax,
    borigin, bcell, bdims,
    colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri,
    eps_t,
):
    """-1 inside, +1 outside (or on the surface).

    Casts an axis ray +x, falling back to +y then +z when a cast lands within
    epsilon of an edge or vertex, and finally to the exact winding-number test
    when no cast is clean.
    """
    for axis in range(3):
        a0 = axis
        a1 = (axis + 1) % 3
        a2 = (axis + 2) % 3
        if a1 == 0:
            c1v = px
        elif a1 == 1:
            c1v = py
        else:
            c1v = pz
        if a2 == 0:
            c2v = px
        elif a2 == 1:
            c2v = py
        else:
            c2v = pz
        if c1v < bmin[a1] or c1v > bmax[a1] or c2v < bmin[a2] or c2v > bmax[a2]:
            return 1  # the ray's cross-section misses every triangle
        c1 = np.int64((c1v - borigin[a1]) // bcell)
        c2 = np.int64((c2v - borigin[a2]) // bcell)
        if c1 < 0:
            c1 = 0
        if c1 > bdims[a1] - 1:
            c1 = bdims[a1] - 1
        if c2 < 0:
            c2 = 0
        if c2 > bdims[a2] - 1:
            c2 = bdims[a2] - 1
        col = c1 + bdims[a1] * c2
        if axis == 0:
            s = colx_off[col]
            e = colx_off[col + 1]
            crossings, certain = _parity_axis(px, py, pz, a0, a1, a2, ta, tb, tc, colx_tri, s, e, eps_t)
        elif axis == 1:
            s = coly_off[col]
            e = coly_off[col + 1]
            crossings, certain = _parity_axis(px, py, pz, a0, a1, a2, ta, tb, tc, coly_tri, s, e, eps_t)
        else:
            s = colz_off[col]
            e = colz_off[col + 1]
            crossings, certain = _parity_axis(px, py, pz, a0, a1, a2, ta, tb, tc, colz_tri, s, e, eps_t)
        if certain:
            if crossings % 2 == 1:
                return -1
            return 1
    w2, ok = _winding2(px, py, pz, ta, tb, tc)
    if not ok:
        return 1  # on the surface; unsigned distance is ~0 there anyway
    if (w2 // 2) % 2 != 0:
        return -1
    return 1


@njit(cache=True)
def _scan_cell(px, py, pz, i, j, k, ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri, best2):
    """Fold the triangles of cell (i, j, k) into best2, with a box pre-reject."""
    blo = borigin[0] + i * bcell
    dx = max(max(blo - px, px - (blo + bcell)), 0.0)
    blo = borigin[1] + j * bcell
    dy = max(max(blo - py, py - (blo + bcell)), 0.0)
    blo = borigin[2] + k * bcell
    dz = max(max(blo - pz, pz - (blo + bcell)), 0.0)
    if dx * dx + dy * dy + dz * dz >= best2:
        return best2
    c = i + bdims[0] * (j + bdims[1] * k)
    for n in range(cell_off[c], cell_off[c + 1]):
        t = cell_tri[n]
        d2 = point_tri_dist2(
            px, py, pz,
            ta[t, 0], ta[t, 1], ta[t, 2],
            tb[t, 0], tb[t, 1], tb[t, 2],
            tc[t, 0], tc[t, 1], tc[t, 2],
        )
        if d2 < best2:
            best2 = d2
    return best2


@njit(cache=True)
def nearest_surface_dist2(
    px, py, pz,
    ta, tb, tc,
    borigin, bcell, bdims,
    cell_off, cell_tri,
):
    """Exact squared distance to the nearest triangle via expanding cell shells.

    Shells grow around the cell of the query point clamped into the bucket
    grid; expansion stops once every unvisited cell is provably farther than
    the best hit so far.
    """
    gmin0 = borigin[0]
    gmin1 = borigin[1]
    gmin2 = borigin[2]
    gmax0 = borigin[0] + bdims[0] * bcell
    gmax1 = borigin[1] + bdims[1] * bcell
    gmax2 = borigin[2] + bdims[2] * bcell

    cx = min(max(px, gmin0), gmax0)
    cy = min(max(py, gmin1), gmax1)
    cz = min(max(pz, gmin2), gmax2)
    c0 = np.int64((cx - gmin0) // bcell)
    c1 = np.int64((cy - gmin1) // bcell)
    c2 = np.int64((cz - gmin2) // bcell)
    if c0 > bdims[0] - 1:
        c0 = bdims[0] - 1
    if c1 > bdims[1] - 1:
        c1 = bdims[1] - 1
    if c2 > bdims[2] - 1:
        c2 = bdims[2] - 1

    o0 = max(max(gmin0 - px, px - gmax0), 0.0)
    o1 = max(max(gmin1 - py, py - gmax1), 0.0)
    o2 = max(max(gmin2 - pz, pz - gmax2), 0.0)

    best2 = 1.0e300
    rho = np.int64(0)
    while True:
        lo0 = max(c0 - rho, 0)
        hi0 = min(c0 + rho, bdims[0] - 1)
        lo1 = max(c1 - rho, 0)
        hi1 = min(c1 + rho, bdims[1] - 1)
        lo2 = max(c2 - rho, 0)
        hi2 = min(c2 + rho, bdims[2] - 1)

        if rho == 0:
            best2 = _scan_cell(
                px, py, pz, c0, c1, c2,
                ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri, best2,
            )
        else:
            for k in range(lo2, hi2 + 1):
                on_k = k == c2 - rho or k == c2 + rho
                for j in range(lo1, hi1 + 1):
                    on_j = j == c1 - rho or j == c1 + rho
                    if on_k or on_j:
                        for i in range(lo0, hi0 + 1):
                            best2 = _scan_cell(
                                px, py, pz, i, j, k,
                                ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri, best2,
                            )
                    else:
                        i = c0 - rho
                        if i >= 0:
                            best2 = _scan_cell(
                                px, py, pz, i, j, k,
                                ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri, best2,
                            )
                        i = c0 + rho
                        if i <= bdims[0] - 1:
                            best2 = _scan_cell(
                                px, py, pz, i, j, k,
                                ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri, best2,
                            )

        # lower bound over everything not yet visited: per axis, the strip of
        # the grid box beyond the visited slab, combined with the distance to
        # the grid box on the other two axes
        lb2 = 1.0e300
        vlo = gmin0 + lo0 * bcell
        vhi = gmin0 + (hi0 + 1) * bcell
        if lo0 > 0:
            g = max(max(px - vlo, gmin0 - px), 0.0)
            d2 = g * g + o1 * o1 + o2 * o2
            if d2 < lb2:
                lb2 = d2
        if hi0 < bdims[0] - 1:
            g = max(max(vhi - px, px - gmax0), 0.0)
            d2 = g * g + o1 * o1 + o2 * o2
            if d2 < lb2:
                lb2 = d2
        vlo = gmin1 + lo1 * bcell
        vhi = gmin1 + (hi1 + 1) * bcell
        if lo1 > 0:
            g = max(max(py - vlo, gmin1 - py), 0.0)
            d2 = g * g + o0 * o0 + o2 * o2
            if d2 < lb2:
                lb2 = d2
        if hi1 < bdims[1] - 1:
            g = max(max(vhi - py, py - gmax1), 0.0)
            d2 = g * g + o0 * o0 + o2 * o2
            if d2 < lb2:
                lb2 = d2
        vlo = gmin2 + lo2 * bcell
        vhi = gmin2 + (hi2 + 1) * bcell
        if lo2 > 0:
            g = max(max(pz - vlo, gmin2 - pz), 0.0)
            d2 = g * g + o0 * o0 + o1 * o1
            if d2 < lb2:
                lb2 = d2
        if hi2 < bdims[2] - 1:
            g = max(max(vhi - pz, pz - gmax2), 0.0)
            d2 = g * g + o0 * o0 + o1 * o1
            if d2 < lb2:
                lb2 = d2

        if lb2 >= best2:
            break
        rho += 1
    return best2


@njit(cache=True, parallel=True)
def sdf_node_values(
    node_origin, spacing, node_dims,
    ta, tb, tc,
    bmin, bmax,
    borigin, bcell, bdims,
    cell_off, cell_tri,
    colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri,
    eps_t,
    out,
):
    """Signed distance at every grid node, flattened x-fastest.

    Nodes are independent, so the parallel schedule cannot change the result.
    """
    nx = node_dims[0]
    ny = node_dims[1]
    nxy = nx * ny
    total = nxy * node_dims[2]
    for idx in prange(total):
        k = idx // nxy
        rem = idx - k * nxy
        j = rem // nx
        i = rem - j * nx
        px = node_origin[0] + i * spacing
        py = node_origin[1] + j * spacing
        pz = node_origin[2] + k * spacing
        d2 = nearest_surface_dist2(px, py, pz, ta, tb, tc, borigin, bcell, bdims, cell_off, cell_tri)
        s = inside_sign(
            px, py, pz, ta, tb, tc, bmin, bmax, borigin, bcell, bdims,
            colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri, eps_t,
        )
        out[idx] = s * np.sqrt(d2)


@njit(cache=True)
def inside_signs_points(
    points,
    ta, tb, tc,
    bmin, bmax,
    borigin, bcell, bdims,
    colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri,
    eps_t,
    out,
):
    """inside_sign for a batch of arbitrary points."""
    for n in range(points.shape[0]):
        out[n] = inside_sign(
            points[n, 0], points[n, 1], points[n, 2],
            ta, tb, tc, bmin, bmax, borigin, bcell, bdims,
            colx_off, colx_tri, coly_off, coly_tri, colz_off, colz_tri, eps_t,
        )
