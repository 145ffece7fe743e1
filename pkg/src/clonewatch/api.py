"""HTTP service for run control and the analyst triage queue.

The snowball engine runs in-process; every mutation goes through the
per-run writer lock, so concurrent verdict posts serialize cleanly and the
event ledger's sequence numbers are the ground truth for ordering. GET
endpoints are pure projections of run state.
"""

from __future__ import annotations

import base64
import json
import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Query as QueryParam
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .errors import EmptyGraph, IllegalTransition, UnknownDomain
from .models import Verdict, VerdictSource
from .snowball import Engine, RunConfig, RunState
from .store import Store

API_VERSION = "1"

QUEUE_VERDICTS = (Verdict.PENDING, Verdict.UNKNOWN)


@dataclass
class RunEnvironment:
    """Everything needed to build an engine for a new or resumed run."""

    store: Store
    provider_factory: Callable[[], object]
    fetcher_factory: Callable[[], object]
    registration_provider: object
    registry: list = field(default_factory=list)
    profile: object = None
    clock_factory: Callable[[], object] = None
    default_config: RunConfig = field(default_factory=lambda: RunConfig(auto_verdicts=False))
    auth_token: Optional[str] = None


class ServerRun:
    """One engine plus its writer lock and background-iteration state."""

    def __init__(self, engine: Engine):
        self.engine = engine
        self.lock = threading.Lock()
        self.iterating = False
        self._thread: threading.Thread | None = None

    def start_iteration(self) -> bool:
        with self.lock:
            if self.iterating:
                return False
            self.iterating = True

        def work():
            try:
                with self.lock:
                    self.engine.run_iteration()
            finally:
                self.iterating = False

        self._thread = threading.Thread(target=work, daemon=True)
        self._thread.start()
        return True

    def wait(self, timeout: float = 30.0) -> None:
        if self._thread is not None:
            self._thread.join(timeout)


class VerdictBody(BaseModel):
    verdict: str
    rationale: str = ""


class CreateRunBody(BaseModel):
    seeds: list[str]
    config: dict = {}
    run_id: Optional[str] = None


def _error(status: int, code: str, message: str, detail: str = "") -> HTTPException:
    return HTTPException(status_code=status, detail={
        "code": code, "message": message, "detail": detail,
    })


def _encode_cursor(offset: int) -> str:
    return base64.urlsafe_b64encode(json.dumps({"o": offset}).encode()).decode()


def _decode_cursor(cursor: str | None) -> int:
    if not cursor:
        return 0
    try:
        return int(json.loads(base64.urlsafe_b64decode(cursor.encode()))["o"])
    except Exception:
        raise _error(400, "bad_cursor", "cursor is not valid")


def triage_item(state: RunState, domain: str) -> dict:
    """Projection of one candidate; never exposes cached raw page bytes."""
    cand = state.candidates[domain]
    indicators = []
    registration = None
    if cand.evidence is not None:
        indicators = [
            {"kind": i.kind.value, "status": i.status.value, "detail": i.detail}
            for i in cand.evidence.indicators
        ]
        if cand.evidence.registration is not None:
            reg = cand.evidence.registration
            registration = {
                "created": reg.created.isoformat() if reg.created else None,
                "updated": reg.updated.isoformat() if reg.updated else None,
                "source": reg.source.value,
            }
    return {
        "run_id": state.run_id,
        "domain": domain,
        "hit_count": cand.hit_count,
        "distinct_origin_articles": cand.distinct_origin_articles,
        "distinct_origin_sites": cand.distinct_origin_sites,
        "first_seen_iteration": cand.first_seen_iteration,
        "surfaced_by": cand.surfaced_by,
        "score": cand.score,
        "verdict": cand.verdict.value,
        "verdict_rationale": cand.verdict_rationale,
        "indicators": indicators,
        "shared_title_sample": [
            {"site": s, "title": t} for s, t in cand.shared_titles()[:5]
        ],
        "registration": registration,
    }


def create_app(env: RunEnvironment, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="clonewatch", version=API_VERSION)
    runs: dict[str, ServerRun] = {}
    runs_guard = threading.Lock()

    def require_auth(authorization: str | None = Header(default=None)) -> None:
        if env.auth_token is None:
            return
        expected = f"Bearer {env.auth_token}"
        if authorization != expected:
            raise _error(401, "unauthorized", "missing or invalid bearer token")

    def build_engine(run_id: str, seeds: list[str], config: RunConfig) -> Engine:
        return Engine(
            run_id=run_id,
            seeds=seeds,
            config=config,
            store=env.store,
            provider=env.provider_factory(),
            fetcher=env.fetcher_factory(),
            registration_provider=env.registration_provider,
            registry=env.registry,
            profile=env.profile,
            clock=env.clock_factory() if env.clock_factory else None,
        )

    def get_run(run_id: str) -> ServerRun:
        with runs_guard:
            if run_id in runs:
                return runs[run_id]
            if run_id in env.store.list_runs():
                engine = build_engine(run_id, [], env.default_config)
                if not engine.started:
                    raise _error(404, "unknown_run", f"run {run_id} has no events")
                engine.config = engine.state.config
                run = ServerRun(engine)
                runs[run_id] = run
                return run
        raise _error(404, "unknown_run", f"no run named {run_id}")

    @app.middleware("http")
    async def version_header(request, call_next):
        response: Response = await call_next(request)
        response.headers["X-API-Version"] = API_VERSION
        return response

    @app.exception_handler(HTTPException)
    async def structured_errors(request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail), "detail": ""}
        return JSONResponse(status_code=exc.status_code, content=detail,
                            headers={"X-API-Version": API_VERSION})

    @app.get("/api/v1/runs", dependencies=[Depends(require_auth)])
    def list_runs():
        known = set(env.store.list_runs()) | set(runs)
        return {"runs": sorted(known)}

    @app.post("/api/v1/runs", status_code=201, dependencies=[Depends(require_auth)])
    def create_run(body: CreateRunBody):
        if not body.seeds:
            raise _error(400, "no_seeds", "a run needs at least one seed URL")
        run_id = body.run_id or f"run-{uuid.uuid4().hex[:10]}"
        with runs_guard:
            if run_id in runs or run_id in env.store.list_runs():
                raise _error(409, "run_exists", f"run {run_id} already exists")
            merged = {**env.default_config.to_json(), **body.config}
            try:
                config = RunConfig.from_json(merged)
            except (TypeError, ValueError, KeyError) as exc:
                raise _error(400, "bad_config", "config overrides not understood",
                             str(exc))
            engine = build_engine(run_id, body.seeds, config)
            engine.start()
            runs[run_id] = ServerRun(engine)
        return {"run_id": run_id, "seeds": body.seeds}

    @app.get("/api/v1/runs/{run_id}/status", dependencies=[Depends(require_auth)])
    def run_status(run_id: str):
        run = get_run(run_id)
        state = run.engine.state
        report = run.engine.report()
        return {
            "run_id": run_id,
            "iteration": state.iteration,
            "query_count": state.query_count,
            "frontier": list(state.frontier),
            "visited": sorted(state.visited),
            "pending": len([c for c in state.candidates.values()
                            if c.verdict in QUEUE_VERDICTS]),
            "iterating": run.iterating,
            "stop_reason": state.stop_reason,
            "report": report.to_json(),
        }

    @app.get("/api/v1/runs/{run_id}/candidates", dependencies=[Depends(require_auth)])
    def list_candidates(
        run_id: str,
        verdict: Optional[str] = QueryParam(default=None),
        cursor: Optional[str] = QueryParam(default=None),
        limit: int = QueryParam(default=50, ge=1, le=500),
    ):
        run = get_run(run_id)
        state = run.engine.state
        if verdict is not None:
            try:
                wanted = {Verdict(verdict)}
            except ValueError:
                raise _error(400, "bad_verdict", f"unknown verdict {verdict!r}")
        else:
            wanted = set(QUEUE_VERDICTS)
        domains = [d for d, c in state.candidates.items() if c.verdict in wanted]
        domains.sort(key=lambda d: (
            -state.candidates[d].score, -state.candidates[d].hit_count, d,
        ))
        offset = _decode_cursor(cursor)
        page = domains[offset : offset + limit]
        next_cursor = (
            _encode_cursor(offset + limit) if offset + limit < len(domains) else None
        )
        return {
            "items": [triage_item(state, d) for d in page],
            "cursor": next_cursor,
            "total": len(domains),
        }

    @app.get(
        "/api/v1/runs/{run_id}/candidates/{domain}/evidence",
        dependencies=[Depends(require_auth)],
    )
    def candidate_evidence(run_id: str, domain: str):
        run = get_run(run_id)
        state = run.engine.state
        cand = state.candidates.get(domain)
        if cand is None:
            raise _error(404, "unknown_domain", f"{domain} is not a candidate")
        return {
            "item": triage_item(state, domain),
            "evidence": cand.evidence.to_json() if cand.evidence else None,
            "shared_titles": [
                {"site": s, "title": t} for s, t in cand.shared_titles()
            ],
        }

    @app.post(
        "/api/v1/runs/{run_id}/candidates/{domain}/verdict",
        dependencies=[Depends(require_auth)],
    )
    def post_verdict(run_id: str, domain: str, body: VerdictBody):
        run = get_run(run_id)
        try:
            verdict = Verdict(body.verdict)
        except ValueError:
            raise _error(400, "bad_verdict", f"unknown verdict {body.verdict!r}")
        with run.lock:
            try:
                delta = run.engine.record_verdict(
                    domain, verdict, body.rationale, VerdictSource.ANALYST
                )
            except UnknownDomain:
                raise _error(404, "unknown_domain", f"{domain} is not a candidate")
            except IllegalTransition as exc:
                raise _error(409, "illegal_transition", str(exc))
            item = triage_item(run.engine.state, domain)
        return {"item": item, "frontier_delta": delta}

    @app.post("/api/v1/runs/{run_id}/iterate", status_code=202,
              dependencies=[Depends(require_auth)])
    def trigger_iteration(run_id: str):
        run = get_run(run_id)
        started = run.start_iteration()
        if not started:
            raise _error(409, "busy", "an iteration is already running")
        return {"run_id": run_id, "status": "iterating"}

    @app.get("/api/v1/runs/{run_id}/graph", dependencies=[Depends(require_auth)])
    def run_graph(run_id: str):
        from . import graph as graph_mod

        run = get_run(run_id)
        try:
            g = graph_mod.build_graph(run.engine.state)
        except EmptyGraph:
            return {"nodes": [], "edges": [], "components": 0, "average_degree": 0.0}
        components = graph_mod.connected_components(g)
        payload = json.loads(graph_mod.export_graph(g, "json").decode("utf-8"))
        payload["components"] = len(components)
        payload["average_degree"] = graph_mod.average_degree(g)
        return payload

    # attach for tests and the CLI
    app.state.runs = runs
    app.state.env = env

    if ui_dir:
        from pathlib import Path

        from fastapi.staticfiles import StaticFiles

        dist = Path(ui_dir)
        if dist.is_dir():
            app.mount("/", StaticFiles(directory=str(dist), html=True), name="ui")

    return app
