import numpy as np
import pytest

from meshsample.errors import EmptySetError, ParseError
from meshsample.particle_io import (
    FORMAT_CSV,
    FORMAT_JSON,
    FORMAT_PLY,
    FORMAT_PLY_BINARY,
    FORMAT_RAWF64,
    decode_particles,
    encode_particles,
    export_particles,
    format_from_path,
    import_particles,
)
from meshsample.particles import ParticleSet


@pytest.fixture
def random_set():
    rng = np.random.default_rng(77)
    return ParticleSet(rng.standard_normal((1000, 3)) * 1.7, spacing=0.25, kind="surface")


class TestEncode:
    def test_csv_single_origin_particle(self):
        ps = ParticleSet([[0.0, 0.0, 0.0]])
        assert encode_particles(ps, FORMAT_CSV) == b"x,y,z\n0,0,0\n"

    def test_csv_values(self):
        ps = ParticleSet([[0.5, -1.25, 3.0]])
        assert encode_particles(ps, FORMAT_CSV) == b"x,y,z\n0.5,-1.25,3\n"

    def test_rawf64_size(self):
        ps = ParticleSet([[0, 0, 0], [1, 2, 3]])
        blob = encode_particles(ps, FORMAT_RAWF64)
        assert len(blob) == 8 + 2 * 3 * 8 == 56

    def test_empty_set_rejected(self):
        ps = ParticleSet(np.empty((0, 3)))
        with pytest.raises(EmptySetError):
            encode_particles(ps, FORMAT_CSV)

    def test_byte_identical_for_equal_sets(self, random_set):
        twin = ParticleSet(random_set.positions.copy(), random_set.spacing, random_set.kind)
        for fmt in (FORMAT_CSV, FORMAT_JSON, FORMAT_PLY, FORMAT_PLY_BINARY, FORMAT_RAWF64):
            assert encode_particles(random_set, fmt) == encode_particles(twin, fmt)

    def test_unknown_format(self, random_set):
        with pytest.raises(ValueError):
            encode_particles(random_set, "vdb")


class TestRoundTrips:
    @pytest.mark.parametrize("fmt", [FORMAT_RAWF64, FORMAT_JSON])
    def test_bit_exact(self, random_set, fmt, tmp_path):
        path = tmp_path / f"p.{fmt}"
        nbytes = export_particles(random_set, fmt, path)
        assert nbytes == path.stat().st_size
        back = import_particles(path, fmt)
        assert np.array_equal(back.positions, random_set.positions)

    def test_json_keeps_metadata(self, random_set):
        back = decode_particles(encode_particles(random_set, FORMAT_JSON), FORMAT_JSON)
        assert back.spacing == random_set.spacing
        assert back.kind == random_set.kind

    def test_csv_value_exact(self, random_set):
        back = decode_particles(encode_particles(random_set, FORMAT_CSV), FORMAT_CSV)
        assert np.array_equal(back.positions, random_set.positions)
        assert back.spacing is None and back.kind == "unknown"

    @pytest.mark.parametrize("fmt", [FORMAT_PLY, FORMAT_PLY_BINARY])
    def test_ply_round_trip(self, random_set, fmt):
        back = decode_particles(encode_particles(random_set, fmt), fmt)
        assert np.array_equal(back.positions, random_set.positions)

    def test_negative_zero_preserved(self):
        ps = ParticleSet([[-0.0, 0.0, 1e-300]])
        back = decode_particles(encode_particles(ps, FORMAT_CSV), FORMAT_CSV)
        assert np.array_equal(back.positions, ps.positions)
        assert np.signbit(back.positions[0, 0])


class TestDecode:
    def test_truncated_rawf64(self):
        import struct

        blob = struct.pack("<Q", 10) + b"\0" * (9 * 24)
        with pytest.raises(ParseError):
            decode_particles(blob, FORMAT_RAWF64)

    def test_csv_newline_variants(self):
        a = decode_particles(b"x,y,z\n1,2,3\n", FORMAT_CSV)
        b = decode_particles(b"x,y,z\r\n1,2,3\r\n\r\n", FORMAT_CSV)
        c = decode_particles(b"x,y,z\n1,2,3", FORMAT_CSV)
        assert np.array_equal(a.positions, b.positions)
        assert np.array_equal(a.positions, c.positions)

    def test_csv_without_header(self):
        ps = decode_particles(b"1,2,3\n4,5,6\n", FORMAT_CSV)
        assert len(ps) == 2

    def test_csv_garbage(self):
        with pytest.raises(ParseError):
            decode_particles(b"x,y,z\n1,2\n", FORMAT_CSV)
        with pytest.raises(ParseError):
            decode_particles(b"x,y,z\n1,foo,3\n", FORMAT_CSV)

    def test_json_requires_positions(self):
        with pytest.raises(ParseError):
            decode_particles(b'{"spacing": 1.0}', FORMAT_JSON)

    def test_ply_binary_truncated(self, random_set):
        blob = encode_particles(random_set, FORMAT_PLY_BINARY)
        with pytest.raises(ParseError):
            decode_particles(blob[:-10], FORMAT_PLY_BINARY)

    def test_format_inference(self):
        assert format_from_path("a.csv") == FORMAT_CSV
        assert format_from_path("a.json") == FORMAT_JSON
        assert format_from_path("a.ply") == FORMAT_PLY
        assert format_from_path("a.rawf64") == FORMAT_RAWF64
        assert format_from_path("a.xyz") is None
