"""Particle set serialization in documented text and binary formats.

All formats store float64 positions; exports of identical sets are
byte-identical (stable ordering, no timestamps). RAWF64 and JSON round-trip
bit-exactly, CSV is value-exact through its decimal text.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .errors import EmptySetError, ParseError
from .particles import KINDS, KIND_UNKNOWN, ParticleSet

FORMAT_CSV = "csv"
FORMAT_JSON = "json"
FORMAT_PLY = "ply"
FORMAT_PLY_BINARY = "ply-binary"
FORMAT_RAWF64 = "rawf64"

FORMATS = (FORMAT_CSV, FORMAT_JSON, FORMAT_PLY, FORMAT_PLY_BINARY, FORMAT_RAWF64)

_EXTENSIONS = {
    ".csv": FORMAT_CSV,
    ".json": FORMAT_JSON,
    ".ply": FORMAT_PLY,
    ".rawf64": FORMAT_RAWF64,
    ".raw": FORMAT_RAWF64,
    ".bin": FORMAT_RAWF64,
}

MEDIA_TYPES = {
    FORMAT_CSV: "text/csv",
    FORMAT_JSON: "application/json",
    FORMAT_PLY: "text/plain",
    FORMAT_PLY_BINARY: "application/octet-stream",
    FORMAT_RAWF64: "application/octet-stream",
}


def format_from_path(path) -> str | None:
    for ext, fmt in _EXTENSIONS.items():
        if str(path).lower().endswith(ext):
            return fmt
    return None


def _fmt_float(x: float) -> str:
    # Shortest decimal that round-trips; integral values drop the ".0".
    s = repr(float(x))
    if s.endswith(".0"):
        return s[:-2]
    return s


def encode_particles(ps: ParticleSet, fmt: str) -> bytes:
    """Serialize to bytes; see the module docstring for the format catalogue."""
    if len(ps) == 0:
        raise EmptySetError("refusing to export an empty particle set")
    if fmt == FORMAT_CSV:
        lines = ["x,y,z"]
        for x, y, z in ps.positions:
            lines.append(f"{_fmt_float(x)},{_fmt_float(y)},{_fmt_float(z)}")
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == FORMAT_JSON:
        doc = {
            "spacing": ps.spacing,
            "kind": ps.kind,
            "positions": [[float(x), float(y), float(z)] for x, y, z in ps.positions],
        }
        return json.dumps(doc, separators=(",", ":")).encode("ascii")
    if fmt in (FORMAT_PLY, FORMAT_PLY_BINARY):
        binary = fmt == FORMAT_PLY_BINARY
        header = [
            "ply",
            "format binary_little_endian 1.0" if binary else "format ascii 1.0",
            f"element vertex {len(ps)}",
            "property double x",
            "property double y",
            "property double z",
            "end_header",
        ]
        head = ("\n".join(header) + "\n").encode("ascii")
        if binary:
            return head + ps.positions.astype("<f8").tobytes()
        body = "\n".join(
            f"{_fmt_float(x)} {_fmt_float(y)} {_fmt_float(z)}" for x, y, z in ps.positions
        )
        return head + (body + "\n").encode("ascii")
    if fmt == FORMAT_RAWF64:
        return struct.pack("<Q", len(ps)) + ps.positions.astype("<f8").tobytes()
    raise ValueError(f"unknown export format {fmt!r}")


def export_particles(ps: ParticleSet, fmt: str, path) -> int:
    """Write the encoded set to ``path``; returns the byte count written."""
    blob = encode_particles(ps, fmt)
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def decode_particles(data: bytes, fmt: str) -> ParticleSet:
    if fmt == FORMAT_CSV:
        return _decode_csv(data)
    if fmt == FORMAT_JSON:
        return _decode_json(data)
    if fmt in (FORMAT_PLY, FORMAT_PLY_BINARY):
        return _decode_ply(data)
    if fmt == FORMAT_RAWF64:
        return _decode_rawf64(data)
    raise ValueError(f"unknown import format {fmt!r}")


def import_particles(path, fmt: str | None = None) -> ParticleSet:
    """Inverse of :func:`export_particles`; format inferred from the suffix if omitted.

    CSV and PLY carry no metadata, so spacing comes back None and the kind
    "unknown".
    """
    if fmt is None:
        fmt = format_from_path(path)
        if fmt is None:
            raise ParseError(f"cannot infer particle format from {path!r}")
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_particles(data, fmt)


def _decode_csv(data: bytes) -> ParticleSet:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"CSV is not valid UTF-8: {exc}") from exc
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if lineno == 1 and line.lower().replace(" ", "") == "x,y,z":
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 3 comma-separated values")
        try:
            rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad coordinate") from exc
    if not rows:
        raise ParseError("CSV contains no particles")
    return ParticleSet(np.asarray(rows, dtype=np.float64))


def _decode_json(data: bytes) -> ParticleSet:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    if not isinstance(doc, dict) or "positions" not in doc:
        raise ParseError("JSON particle file needs a 'positions' array")
    positions = np.asarray(doc["positions"], dtype=np.float64)
    if positions.ndim != 2 or positions.shape[1] != 3:
        raise ParseError("'positions' must be an array of [x, y, z] triples")
    kind = doc.get("kind", KIND_UNKNOWN)
    if kind not in KINDS:
        kind = KIND_UNKNOWN
    return ParticleSet(positions, spacing=doc.get("spacing"), kind=kind)


def _decode_rawf64(data: bytes) -> ParticleSet:
    if len(data) < 8:
        raise ParseError("RAWF64 shorter than its count header")
    (count,) = struct.unpack_from("<Q", data, 0)
    expected = 8 + 24 * count
    if len(data) != expected:
        raise ParseError(f"RAWF64 length {len(data)} != {expected} for {count} particles")
    positions = np.frombuffer(data, dtype="<f8", count=3 * count, offset=8).reshape(-1, 3)
    return ParticleSet(positions)


def _decode_ply(data: bytes) -> ParticleSet:
    end = data.find(b"end_header")
    if not data.startswith(b"ply") or end < 0:
        raise ParseError("not a PLY file")
    end_line = data.find(b"\n", end)
    if end_line < 0:
        raise ParseError("PLY header is not terminated")
    header = data[:end_line].decode("ascii", errors="replace").splitlines()
    body = data[end_line + 1 :]

    binary = None
    count = None
    props = []
    for line in header[1:]:
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0] == "format":
            if tokens[1] == "ascii":
                binary = False
            elif tokens[1] == "binary_little_endian":
                binary = True
            else:
                raise ParseError(f"unsupported PLY format {tokens[1]!r}")
        elif tokens[0] == "element":
            if tokens[1] != "vertex":
                raise ParseError("only point-cloud PLY (single vertex element) is supported")
            count = int(tokens[2])
        elif tokens[0] == "property":
            props.append((tokens[1], tokens[2]))
    if binary is None or count is None:
        raise ParseError("PLY header misses format or vertex element")
    if [p[1] for p in props] != ["x", "y", "z"]:
        raise ParseError("PLY vertex element must hold exactly x, y, z")

    if binary:
        dtype = np.dtype([(name, "<f8" if kind == "double" else "<f4") for kind, name in props])
        if len(body) < count * dtype.itemsize:
            raise ParseError("PLY payload truncated")
        rec = np.frombuffer(body, dtype=dtype, count=count)
        positions = np.stack([rec["x"], rec["y"], rec["z"]], axis=1).astype(np.float64)
    else:
        rows = []
        for raw in body.decode("ascii", errors="replace").splitlines():
            line = raw.strip()
            if line:
                parts = line.split()
                if len(parts) != 3:
                    raise ParseError("PLY vertex row must hold 3 coordinates")
                rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
        if len(rows) != count:
            raise ParseError(f"PLY row count {len(rows)} != declared {count}")
        positions = np.asarray(rows, dtype=np.float64)
    return ParticleSet(positions)
