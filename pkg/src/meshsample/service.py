"""HTTP/JSON sampling service driven by the browser viewer.

Sessions are in-memory with LRU eviction; a stored mesh is immutable, and
every sampling request carries the full parameter set (including
normalization and scaling), so re-sampling never needs a re-upload.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import particle_io
from .errors import MeshSampleError
from .geometry import TriangleMesh, load_mesh_bytes, normalize_mesh, scale_mesh
from .particles import ParticleSet
from .surface import SurfaceSamplingConfig, sample_surface
from .volume import VolumeSamplingConfig, sample_volume

DEFAULT_MAX_BODY = 64 * 1024 * 1024
DEFAULT_MAX_SESSIONS = 16
DEFAULT_TIME_BUDGET = 120.0

KIND_TO_MODE = {"volumeGrid": "grid", "volumeRandom": "random"}


@dataclass
class Session:
    session_id: str
    mesh: TriangleMesh
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_result: ParticleSet | None = None
    last_config: dict | None = None


@dataclass
class PendingJob:
    token: str
    session: Session
    done: threading.Event = field(default_factory=threading.Event)
    result: dict | None = None
    error: tuple[int, str, str] | None = None  # status, name, detail


class SessionStore:
    def __init__(self, max_sessions: int):
        self.max_sessions = max_sessions
        self._lock = threading.Lock()
        self._sessions: OrderedDict[str, Session] = OrderedDict()

    def put(self, mesh: TriangleMesh) -> Session:
        session = Session(session_id=uuid.uuid4().hex, mesh=mesh)
        with self._lock:
            self._sessions[session.session_id] = session
            while len(self._sessions) > self.max_sessions:
                self._sessions.popitem(last=False)
        return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None:
                self._sessions.move_to_end(session_id)
            return session


def _error(status: int, name: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": name, "detail": detail})


def _mesh_summary(session: Session) -> dict:
    mesh = session.mesh
    box = mesh.aabb
    return {
        "sessionId": session.session_id,
        "vertexCount": mesh.vertex_count,
        "triangleCount": mesh.triangle_count,
        "aabb": {"min": box.min.tolist(), "max": box.max.tolist()},
        "surfaceArea": mesh.total_area,
    }


def _transformed_mesh(mesh: TriangleMesh, params: dict) -> TriangleMesh:
    if params.get("normalize"):
        mesh = normalize_mesh(mesh)
    scale = params.get("scale", 1.0)
    factors = np.asarray(scale, dtype=np.float64).reshape(-1)
    if factors.size == 1:
        factors = np.repeat(factors, 3)
    if factors.shape != (3,):
        raise ValueError("scale must be a number or a 3-vector")
    if not np.all(factors == 1.0):
        mesh = scale_mesh(mesh, factors)
    return mesh


def _run_sampling(session: Session, kind: str, params: dict) -> dict:
    mesh = _transformed_mesh(session.mesh, params)
    seed = int(params.get("seed", 0))
    t0 = time.perf_counter()
    if kind == "surface":
        if "minDist" not in params:
            raise ValueError("surface sampling needs params.minDist")
        cfg = SurfaceSamplingConfig(
            min_dist=float(params["minDist"]),
            density=float(params.get("density", 40.0)),
            trials=int(params.get("trials", 10)),
            norm=str(params.get("norm", "euclidean")),
            seed=seed,
        )
        cfg.validate()
        ps = sample_surface(mesh, cfg)
        config_record = {"kind": kind, **params, "seed": seed}
    else:
        if "radius" not in params:
            raise ValueError("volume sampling needs params.radius")
        cfg = VolumeSamplingConfig(
            radius=float(params["radius"]),
            mode=KIND_TO_MODE[kind],
            invert=bool(params.get("invert", False)),
            sdf_resolution=int(params.get("sdfResolution", 30)),
            density=None if params.get("density") is None else float(params["density"]),
            trials=int(params.get("trials", 10)),
            margin=float(params.get("margin", 0.0)),
            seed=seed,
        )
        cfg.validate()
        ps = sample_volume(mesh, cfg)
        config_record = {"kind": kind, **params, "seed": seed}
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    session.last_result = ps
    session.last_config = config_record
    return {
        "particleCount": len(ps),
        "spacing": ps.spacing,
        "elapsedMs": elapsed_ms,
    }


def create_app(
    max_sessions: int = DEFAULT_MAX_SESSIONS,
    max_body: int = DEFAULT_MAX_BODY,
    time_budget: float = DEFAULT_TIME_BUDGET,
    static_dir: str | None = None,
) -> FastAPI:
    """Build the service; ``time_budget`` is the synchronous sampling window in
    seconds, beyond which /api/sample answers 202 with a poll token."""
    app = FastAPI(title="meshsample service")
    store = SessionStore(max_sessions)
    jobs: dict[str, PendingJob] = {}
    jobs_lock = threading.Lock()

    @app.post("/api/mesh")
    async def upload_mesh(request: Request):
        body = await request.body()
        if len(body) == 0:
            return _error(400, "ParseError", "empty body")
        if len(body) > max_body:
            return _error(413, "TooLarge", f"body exceeds {max_body} bytes")
        content_type = request.headers.get("content-type", "").lower()
        if "stl" in content_type or "octet-stream" in content_type or content_type == "application/sla":
            fmt = "stl"
        else:
            fmt = "obj"
        try:
            mesh = load_mesh_bytes(body, fmt)
        except MeshSampleError as exc:
            return _error(400, type(exc).__name__, str(exc))
        session = store.put(mesh)
        return _mesh_summary(session)

    @app.post("/api/sample")
    async def sample(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _error(422, "InvalidBody", "body must be JSON")
        if not isinstance(payload, dict):
            return _error(422, "InvalidBody", "body must be a JSON object")
        session_id = payload.get("sessionId")
        kind = payload.get("kind")
        params = payload.get("params", {})
        if kind not in ("surface", "volumeGrid", "volumeRandom"):
            return _error(422, "InvalidParams", f"unknown sampling kind {kind!r}")
        if not isinstance(params, dict):
            return _error(422, "InvalidParams", "params must be an object")
        session = store.get(session_id) if isinstance(session_id, str) else None
        if session is None:
            return _error(404, "UnknownSession", f"no session {session_id!r}")
        if not session.lock.acquire(blocking=False):
            return _error(409, "Busy", "another sampling runs on this session")

        job = PendingJob(token=uuid.uuid4().hex, session=session)

        def work():
            try:
                job.result = _run_sampling(session, kind, params)
            except (ValueError, TypeError, KeyError) as exc:
                job.error = (422, "InvalidParams", str(exc))
            except MeshSampleError as exc:
                job.error = (409, type(exc).__name__, str(exc))
            except Exception as exc:  # pragma: no cover - defensive
                job.error = (500, type(exc).__name__, str(exc))
            finally:
                session.lock.release()
                job.done.set()

        thread = threading.Thread(target=work, daemon=True)
        thread.start()
        if job.done.wait(timeout=time_budget):
            if job.error is not None:
                status, name, detail = job.error
                return _error(status, name, detail)
            return job.result
        with jobs_lock:
            jobs[job.token] = job
        return JSONResponse(status_code=202, content={"pollToken": job.token})

    @app.get("/api/poll")
    async def poll(token: str = Query(...)):
        with jobs_lock:
            job = jobs.get(token)
        if job is None:
            return _error(404, "UnknownToken", f"no pending job {token!r}")
        if not job.done.is_set():
            return {"status": "running"}
        with jobs_lock:
            jobs.pop(token, None)
        if job.error is not None:
            status, name, detail = job.error
            return _error(status, name, detail)
        return {"status": "done", **job.result}

    @app.get("/api/result")
    async def result(sessionId: str = Query(...), format: str = Query("json")):
        session = store.get(sessionId)
        if session is None:
            return _error(404, "UnknownSession", f"no session {sessionId!r}")
        if session.last_result is None:
            return _error(404, "NoResult", "no sampling result stored yet")
        fmt = format.lower()
        if fmt not in particle_io.FORMATS:
            return _error(422, "InvalidParams", f"unknown format {format!r}")
        try:
            blob = particle_io.encode_particles(session.last_result, fmt)
        except MeshSampleError as exc:
            return _error(409, type(exc).__name__, str(exc))
        return Response(content=blob, media_type=particle_io.MEDIA_TYPES[fmt])

    @app.get("/api/session")
    async def session_info(sessionId: str = Query(...)):
        session = store.get(sessionId)
        if session is None:
            return _error(404, "UnknownSession", f"no session {sessionId!r}")
        info = _mesh_summary(session)
        info["lastConfig"] = session.last_config
        info["particleCount"] = None if session.last_result is None else len(session.last_result)
        return info

    static = _resolve_static(static_dir)
    if static is not None:
        app.mount("/", StaticFiles(directory=str(static), html=True), name="viewer")
    return app


def _resolve_static(static_dir: str | None) -> Path | None:
    if static_dir:
        p = Path(static_dir)
        return p if p.is_dir() else None
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if candidate.is_dir():
        return candidate
    candidate = Path.cwd() / "frontend" / "dist"
    return candidate if candidate.is_dir() else None
