"""HTTP session service for the exemplar-based design loop.

A session holds a set of exemplars (drawn, recorded, or sampled from an
oracle at creation time) plus the spec and error map inferred from them.
Mutations re-run inference synchronously and bump the revision; every
response embeds the revision it reflects.  Sessions persist as directories
of the same JSON files the CLI emits, so the service and CLI share one code
path and produce identical artifacts for identical inputs.

Endpoints::

    POST /sessions                        {"samples": {...}} or {"oracle": {...}, "min": [w,h], ...}
    GET  /sessions/{id}
    PUT  /sessions/{id}/exemplars/{WxH}   snapshot JSON
    GET  /sessions/{id}/spec
    GET  /sessions/{id}/render?w=&h=
    GET  /sessions/{id}/errormap(.png|.json)
    GET  /sessions/{id}/samples
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .errormap import build_error_map, render_error_map
from .geometry import (ParseError, SampleSet, SizeOutOfRange, ValidationError,
                       sample_set_from_dict, sample_set_to_dict,
                       snapshot_from_dict, snapshot_to_dict)
from .oracles import (MissingSample, Oracle, OracleConfig, make_oracle,
                      recorded_oracle)
from .orcspec import deserialize, render, serialize, spec_to_dict
from .pipeline import run_pipeline, run_pipeline_from_samples
from .sampler import grid_from_sample_set


class Session:
    def __init__(self, session_id: str, root: Path):
        self.id = session_id
        self.root = root
        self.lock = threading.Lock()
        self.revision = 0
        self.sample_set: SampleSet | None = None
        self.oracle: Oracle | None = None         # original source, when one exists
        self.oracle_config: OracleConfig | None = None
        self.spec = None
        self.emap = None
        self.png: bytes = b""

    # -- persistence ------------------------------------------------------------

    def save(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "samples.json").write_bytes(
            json.dumps(sample_set_to_dict(self.sample_set), sort_keys=True, indent=1).encode())
        (self.root / "spec.json").write_bytes(serialize(self.spec))
        (self.root / "errormap.json").write_bytes(self.emap.dump())
        (self.root / "errormap.png").write_bytes(self.png)
        meta = {"id": self.id, "revision": self.revision}
        if self.oracle_config is not None:
            meta["oracle"] = self.oracle_config.to_dict()
        (self.root / "meta.json").write_bytes(json.dumps(meta, sort_keys=True, indent=1).encode())

    @staticmethod
    def load(root: Path) -> "Session":
        meta = json.loads((root / "meta.json").read_text("utf-8"))
        session = Session(meta["id"], root)
        session.revision = meta["revision"]
        session.sample_set = sample_set_from_dict(
            json.loads((root / "samples.json").read_text("utf-8")))
        if "oracle" in meta:
            session.oracle_config = OracleConfig.from_dict(meta["oracle"])
            session.oracle = make_oracle(session.oracle_config)
        session.spec = deserialize((root / "spec.json").read_bytes())
        session.emap_from_disk = True
        from .errormap import ErrorMap, Band, FaultLine
        doc = json.loads((root / "errormap.json").read_text("utf-8"))
        emap = ErrorMap(scale=doc["scale"], min_size=tuple(doc["min_size"]),
                        max_size=tuple(doc["max_size"]))
        emap.e_max = doc["e_max"]
        emap.cells = [{"size": tuple(c["size"]), "error": c["error"], "fault": c["fault"]}
                      for c in doc["cells"]]
        emap.bands = [Band(b["axis"], tuple(b["interval"]), b["direction"], b["certainty"])
                      for b in doc["bands"]]
        emap.fault_lines = [FaultLine(f["axis"], f["position"], f["cause"])
                            for f in doc["fault_lines"]]
        session.emap = emap
        session.png = (root / "errormap.png").read_bytes()
        return session

    # -- inference ----------------------------------------------------------------

    def infer_from_samples(self) -> None:
        result = run_pipeline_from_samples(self.sample_set)
        self.spec = result.spec
        self.emap = result.emap
        self.png = render_error_map(self.emap)

    def upsert(self, snapshot) -> None:
        samples = dict(self.sample_set.samples)
        samples[snapshot.size] = snapshot
        self.sample_set = SampleSet(samples=samples, provenance=self.sample_set.provenance)
        self.infer_from_samples()
        self.revision += 1
        self.save()


def create_app(sessions_dir: Path) -> FastAPI:
    app = FastAPI(title="resizelens sessions")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    sessions_dir.mkdir(parents=True, exist_ok=True)
    for entry in sorted(sessions_dir.iterdir()) if sessions_dir.exists() else []:
        if (entry / "meta.json").exists():
            try:
                s = Session.load(entry)
                sessions[s.id] = s
            except (ParseError, ValidationError, KeyError, json.JSONDecodeError):
                continue  # unreadable session directory; skip it

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            raise HTTPException(status_code=400, detail=f"malformed JSON: {exc}")
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, sessions_dir / session_id)
        try:
            if "samples" in body:
                session.sample_set = sample_set_from_dict(body["samples"])
                session.infer_from_samples()
            elif "oracle" in body or "oracle_builtin" in body:
                config = (OracleConfig.from_dict(body["oracle"]) if "oracle" in body
                          else OracleConfig(body["oracle_builtin"], body.get("params", {})))
                session.oracle_config = config
                session.oracle = make_oracle(config)
                result = run_pipeline(
                    session.oracle,
                    tuple(body["min"]) if "min" in body else None,
                    tuple(body["max"]) if "max" in body else None,
                    delta=body.get("delta", 4))
                session.sample_set = SampleSet(
                    samples={s: snap for s, (snap, _) in result.grid.samples.items()},
                    provenance="oracle")
                session.spec, session.emap = result.spec, result.emap
                session.png = render_error_map(session.emap)
            else:
                raise HTTPException(status_code=400,
                                    detail="body needs 'samples', 'oracle' or 'oracle_builtin'")
        except (ParseError, ValidationError, SizeOutOfRange, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session.revision = 1
        session.save()
        with registry_lock:
            sessions[session_id] = session
        return _session_meta(session)

    def _session_meta(session: Session) -> dict:
        return {
            "id": session.id,
            "revision": session.revision,
            "min_size": list(session.sample_set.min_size),
            "max_size": list(session.sample_set.max_size),
            "sizes": [list(s) for s in session.sample_set.sorted_sizes()],
            "has_oracle": session.oracle is not None,
            "patterns": session.spec.patterns,
        }

    @app.get("/sessions/{session_id}")
    def session_meta(session_id: str):
        return _session_meta(get_session(session_id))

    @app.put("/sessions/{session_id}/exemplars/{size}")
    async def upsert_exemplar(session_id: str, size: str, request: Request):
        session = get_session(session_id)
        try:
            w, h = (int(x) for x in size.lower().split("x"))
        except ValueError:
            raise HTTPException(status_code=400, detail=f"bad size {size!r}, expected WxH")
        try:
            body = await request.json()
            snapshot = snapshot_from_dict(body)
        except (json.JSONDecodeError, ParseError, ValidationError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if snapshot.size != (w, h):
            raise HTTPException(status_code=400,
                                detail=f"snapshot window {snapshot.size} != path size {(w, h)}")
        with session.lock:
            session.upsert(snapshot)
            return {"id": session.id, "revision": session.revision}

    @app.get("/sessions/{session_id}/spec")
    def get_spec(session_id: str):
        session = get_session(session_id)
        doc = spec_to_dict(session.spec)
        return {"revision": session.revision, "spec": doc}

    @app.get("/sessions/{session_id}/render")
    def get_render(session_id: str, w: int, h: int):
        session = get_session(session_id)
        try:
            reconstructed = render(session.spec, w, h)
        except SizeOutOfRange as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        original = None
        if (w, h) in session.sample_set.samples:
            original = session.sample_set.samples[(w, h)]
        elif session.oracle is not None:
            try:
                original = session.oracle.query(w, h)
            except (SizeOutOfRange, MissingSample):
                original = None
        return {
            "revision": session.revision,
            "reconstructed": snapshot_to_dict(reconstructed),
            "original": snapshot_to_dict(original) if original is not None else None,
        }

    @app.get("/sessions/{session_id}/errormap.json")
    def get_errormap_json(session_id: str):
        session = get_session(session_id)
        return {"revision": session.revision, "errormap": session.emap.to_dict()}

    @app.get("/sessions/{session_id}/errormap.png")
    def get_errormap_png(session_id: str):
        session = get_session(session_id)
        return Response(content=session.png, media_type="image/png",
                        headers={"X-Revision": str(session.revision)})

    @app.get("/sessions/{session_id}/errormap")
    def get_errormap(session_id: str):
        return get_errormap_json(session_id)

    @app.get("/sessions/{session_id}/samples")
    def get_samples(session_id: str):
        session = get_session(session_id)
        return {"revision": session.revision,
                "samples": sample_set_to_dict(session.sample_set)}

    return app
