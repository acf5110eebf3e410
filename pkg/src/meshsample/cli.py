"""Command line frontend: surface / volume / analyze / serve.

Data goes to the output path (or stdout); progress and summaries go to
stderr. Exit codes: 0 success, 1 usage error, 2 processing error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import particle_io
from .errors import MeshSampleError, UsageError
from .geometry import load_mesh, normalize_mesh, scale_mesh
from .surface import NORMS, SurfaceSamplingConfig, sample_surface
from .volume import MODES, VolumeSamplingConfig, nearest_neighbor_stats, sample_volume


def apply_thread_cap():
    """Honor LEAVEN_THREADS: cap compiled-kernel parallelism (0 or unset = auto)."""
    raw = os.environ.get("LEAVEN_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        return
    if n > 0:
        try:
            import numba

            numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
        except ImportError:
            pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_scale(text: str) -> np.ndarray:
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad --scale value {text!r}") from exc
    if len(vals) == 1:
        vals = vals * 3
    if len(vals) != 3:
        raise UsageError("--scale takes one factor or three comma-separated factors")
    return np.asarray(vals)


def _parse_seed(text: str) -> int:
    if text == "random":
        return int(np.random.SeedSequence().entropy % (1 << 63))
    try:
        return int(text)
    except ValueError as exc:
        raise UsageError(f"--seed takes an integer or 'random', got {text!r}") from exc


def _add_mesh_args(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True, help="input mesh (OBJ or STL)")
    p.add_argument("--normalize", action="store_true", help="fit the mesh into a unit box about the origin")
    p.add_argument("--scale", default="1", help="uniform factor or X,Y,Z per-axis factors, applied after normalization")
    p.add_argument("--seed", default="0", help="RNG seed (integer) or 'random'")
    p.add_argument("--output", default="-", help="output path; '-' writes to stdout")
    p.add_argument("--format", choices=list(particle_io.FORMATS), default=None,
                   help="particle format; default inferred from the output suffix, else csv")


def build_parser() -> _Parser:
    parser = _Parser(prog="meshsample", description="Mesh surface/volume particle sampling toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("surface", help="Poisson-disk sample the mesh surface")
    _add_mesh_args(s)
    s.add_argument("--min-dist", type=float, required=True, help="minimum particle distance d")
    s.add_argument("--density", type=float, default=40.0, help="candidate density factor")
    s.add_argument("--trials", type=int, default=10, help="acceptance trial rounds")
    s.add_argument("--norm", choices=list(NORMS), default="euclidean")

    v = sub.add_parser("volume", help="sample the enclosed volume")
    _add_mesh_args(v)
    v.add_argument("--radius", type=float, required=True, help="particle radius r (spacing 2r)")
    v.add_argument("--mode", choices=list(MODES), default="grid")
    v.add_argument("--sdf-resolution", type=int, default=30)
    v.add_argument("--invert", action="store_true", help="sample between mesh and bounding box")
    v.add_argument("--margin", type=float, default=0.0,
                   help="min depth of particle centers behind the surface (use the radius to keep whole spheres inside)")
    v.add_argument("--density", type=float, default=None, help="candidates per grid cell (random mode); default: trials")
    v.add_argument("--trials", type=int, default=10)

    a = sub.add_parser("analyze", help="report particle statistics")
    a.add_argument("--input", required=True, help="particle file (csv/json/ply/rawf64)")
    a.add_argument("--format", choices=list(particle_io.FORMATS), default=None)
    a.add_argument("--spacing", type=float, default=None, help="override the declared spacing")
    a.add_argument("--json", action="store_true", help="machine-readable output")
    a.add_argument("--figures", default=None, metavar="DIR",
                   help="also render histogram/projection figures and a stats CSV into DIR")

    srv = sub.add_parser("serve", help="start the HTTP sampling service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--static", default=None, help="directory of viewer assets to serve at /")
    srv.add_argument("--max-sessions", type=int, default=16)
    return parser


def _load_transformed(args) -> "TriangleMesh":
    mesh = load_mesh(args.input)
    if args.normalize:
        mesh = normalize_mesh(mesh)
    factors = _parse_scale(args.scale)
    if not np.all(factors == 1.0):
        mesh = scale_mesh(mesh, factors)
    return mesh


def _emit(ps, args) -> int:
    fmt = args.format or particle_io.format_from_path(args.output) or particle_io.FORMAT_CSV
    blob = particle_io.encode_particles(ps, fmt)
    if args.output == "-":
        sys.stdout.buffer.write(blob)
        sys.stdout.buffer.flush()
    else:
        with open(args.output, "wb") as fh:
            fh.write(blob)
    return len(blob)


def _cmd_surface(args) -> int:
    mesh = _load_transformed(args)
    cfg = SurfaceSamplingConfig(
        min_dist=args.min_dist,
        density=args.density,
        trials=args.trials,
        norm=args.norm,
        seed=_parse_seed(args.seed),
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    ps = sample_surface(mesh, cfg)
    elapsed = time.perf_counter() - t0
    nbytes = _emit(ps, args)
    print(f"{len(ps)} surface particles (d={cfg.min_dist:g}) in {elapsed:.2f}s, "
          f"{nbytes} bytes written", file=sys.stderr)
    return 0


def _cmd_volume(args) -> int:
    mesh = _load_transformed(args)
    cfg = VolumeSamplingConfig(
        radius=args.radius,
        mode=args.mode,
        invert=args.invert,
        sdf_resolution=args.sdf_resolution,
        density=args.density,
        trials=args.trials,
        margin=args.margin,
        seed=_parse_seed(args.seed),
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    t0 = time.perf_counter()
    ps = sample_volume(mesh, cfg)
    elapsed = time.perf_counter() - t0
    nbytes = _emit(ps, args)
    print(f"{len(ps)} volume particles ({cfg.mode}, r={cfg.radius:g}) in {elapsed:.2f}s, "
          f"{nbytes} bytes written", file=sys.stderr)
    return 0


def _cmd_analyze(args) -> int:
    from .quality import verify_min_distance

    ps = particle_io.import_particles(args.input, args.format)
    spacing = args.spacing if args.spacing is not None else ps.spacing
    stats = {
        "count": len(ps),
        "kind": ps.kind,
        "spacing": spacing,
        "nn_min": None,
        "nn_mean": None,
        "nn_max": None,
        "min_pair_distance": None,
        "violations": None,
    }
    if len(ps) >= 2:
        nn_min, nn_mean, nn_max = nearest_neighbor_stats(ps)
        stats.update(nn_min=nn_min, nn_mean=nn_mean, nn_max=nn_max)
        if spacing is not None:
            report = verify_min_distance(ps, spacing)
            stats["min_pair_distance"] = report.min_pair_distance
            stats["violations"] = len(report.violations)
        else:
            stats["min_pair_distance"] = nn_min

    if args.figures:
        from scipy.spatial import cKDTree

        from .report import nn_histogram_figure, projection_figure, write_report_csv

        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        written = [write_report_csv(stats, outdir / "report.csv")]
        if len(ps) >= 2:
            nn = cKDTree(ps.positions).query(ps.positions, k=2)[0][:, 1]
            written.append(nn_histogram_figure(nn, spacing, outdir / "nn_hist.png"))
        written.append(projection_figure(ps, outdir / "projections.png"))
        print("wrote " + ", ".join(written), file=sys.stderr)

    if args.json:
        sys.stdout.write(json.dumps(stats, indent=2) + "\n")
    else:
        lines = [f"{len(ps)} particles, kind {ps.kind}, spacing "
                 f"{'unknown' if spacing is None else f'{spacing:g}'}"]
        if stats["nn_min"] is not None:
            lines.append(
                f"nearest neighbor: min {stats['nn_min']:.6g}, mean {stats['nn_mean']:.6g}, "
                f"max {stats['nn_max']:.6g}"
            )
        if stats["violations"] is not None:
            lines.append(
                f"min pair distance {stats['min_pair_distance']:.6g}; "
                f"{stats['violations']} violation(s) of spacing {spacing:g}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(max_sessions=args.max_sessions, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def run(argv) -> int:
    """Parse and execute; returns the process exit code."""
    apply_thread_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "surface":
            return _cmd_surface(args)
        if args.command == "volume":
            return _cmd_volume(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "serve":
            return _cmd_serve(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MeshSampleError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
