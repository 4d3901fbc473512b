"""HTTP/JSON facade hosting live labeling sessions.

Sessions live in memory behind per-session locks; an optional snapshot
directory receives a JSON file per session after every label so a human
labeling run survives a restart (snapshots are replayed on startup).
Errors are returned as {"code", "message"} bodies.
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .dataset import Dataset, load_csv
from .errors import (
    HsalError,
    ConfigurationError,
    OutOfOrderError,
    ParseError,
    PoolExhaustedError,
    SessionComplete,
    ValidationError,
)
from .session import (
    ActiveSession,
    SessionConfig,
    auc,
    curve_export,
    next_query,
    start_session,
    submit_label,
)
from .strategies import StrategyConfig


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"code": code, "message": message}
    )


class SessionStore:
    """Process-lifetime session registry with per-session writer locks."""

    def __init__(self):
        self._sessions: dict[str, tuple[ActiveSession, threading.Lock]] = {}
        self._registry_lock = threading.Lock()

    def add(self, session: ActiveSession, session_id: str | None = None) -> str:
        sid = session_id or uuid.uuid4().hex
        with self._registry_lock:
            self._sessions[sid] = (session, threading.Lock())
        return sid

    def get(self, session_id: str) -> tuple[ActiveSession, threading.Lock]:
        with self._registry_lock:
            entry = self._sessions.get(session_id)
        if entry is None:
            raise ServiceError(404, "unknown_session", f"no session {session_id!r}")
        return entry

    def ids(self) -> list[str]:
        with self._registry_lock:
            return list(self._sessions)


def _config_from_overrides(overrides: dict) -> SessionConfig:
    overrides = dict(overrides or {})
    strategy = overrides.pop("strategy", "hse")
    if isinstance(strategy, dict):
        strategy_cfg = StrategyConfig(**strategy)
    else:
        strategy_cfg = StrategyConfig(
            kind=strategy, seed=int(overrides.get("seed", 0))
        )
    allowed = {
        "k",
        "perplexity",
        "query_budget",
        "subquery_factor",
        "initial_queries",
        "graph_kind",
        "seed",
        "subquery_log_base",
    }
    unknown = set(overrides) - allowed
    if unknown:
        raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
    return SessionConfig(strategy=strategy_cfg, **overrides)


def _config_echo(config: SessionConfig) -> dict:
    return {
        "k": config.k,
        "perplexity": config.perplexity,
        "query_budget": config.query_budget,
        "subquery_factor": config.subquery_factor,
        "initial_queries": config.initial_queries,
        "strategy": config.strategy.kind,
        "graph_kind": config.graph_kind,
        "seed": config.seed,
    }


def _snapshot(session: ActiveSession, session_id: str, snapshot_dir: Path) -> None:
    payload = {
        "session_id": session_id,
        "dataset": session.dataset.name,
        "config": _config_echo(session.config),
        "query_log": [
            {"point": q.point, "class": q.cls, "timestamp": q.timestamp}
            for q in session.query_log
        ],
        "accuracies": session.curve.accuracies,
        "status": session.status,
    }
    snapshot_dir.mkdir(parents=True, exist_ok=True)
    path = snapshot_dir / f"{session_id}.json"
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")


def _restore_sessions(app_state, snapshot_dir: Path) -> None:
    for path in sorted(snapshot_dir.glob("*.json")):
        payload = json.loads(path.read_text(encoding="utf-8"))
        name = payload.get("dataset")
        dataset = app_state.datasets.get(name)
        if dataset is None:
            continue
        config = _config_from_overrides(
            {**payload.get("config", {}), "strategy": payload["config"]["strategy"]}
        )
        session = start_session(dataset, config)
        for rec in payload.get("query_log", []):
            point = next_query(session)
            if point != rec["point"]:
                break  # stale snapshot; keep what replayed cleanly
            submit_label(session, rec["point"], rec["class"])
        app_state.store.add(session, payload.get("session_id"))


class _State:
    def __init__(self, datasets: dict[str, Dataset], snapshot_dir: Path | None):
        self.datasets = datasets
        self.snapshot_dir = snapshot_dir
        self.store = SessionStore()


def create_app(
    dataset_dir: str | Path | None = None,
    datasets: dict[str, Dataset] | None = None,
    snapshot_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service over named datasets and/or a directory of CSVs.

    ``ui_dir`` optionally mounts a built browser client at the root path.
    """
    registry: dict[str, Dataset] = dict(datasets or {})
    if dataset_dir is not None:
        for path in sorted(Path(dataset_dir).glob("*.csv")):
            try:
                registry[path.stem] = load_csv(path)
            except (ParseError, ValidationError):
                continue
    state = _State(registry, Path(snapshot_dir) if snapshot_dir else None)

    app = FastAPI(title="hsal labeling service")
    app.state.hsal = state
    if state.snapshot_dir is not None and state.snapshot_dir.exists():
        _restore_sessions(state, state.snapshot_dir)

    @app.exception_handler(ServiceError)
    async def _service_error(_req: Request, exc: ServiceError):
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(HsalError)
    async def _hsal_error(_req: Request, exc: HsalError):
        return _error(400, "invalid_request", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _body_error(_req: Request, exc: RequestValidationError):
        return _error(400, "invalid_body", str(exc.errors()))

    @app.post("/api/sessions", status_code=201)
    async def create_session(body: dict):
        config_overrides = body.get("config", {})
        try:
            config = _config_from_overrides(config_overrides)
        except (ConfigurationError, TypeError) as exc:
            raise ServiceError(400, "invalid_config", str(exc)) from None
        if "csv" in body:
            import tempfile

            with tempfile.NamedTemporaryFile(
                "w", suffix=".csv", delete=False, encoding="utf-8"
            ) as fh:
                fh.write(body["csv"])
                tmp = fh.name
            try:
                dataset = load_csv(tmp)
            except (ParseError, ValidationError) as exc:
                raise ServiceError(400, "invalid_dataset", str(exc)) from None
        else:
            name = body.get("dataset")
            dataset = state.datasets.get(name)
            if dataset is None:
                raise ServiceError(404, "unknown_dataset", f"no dataset {name!r}")
        try:
            session = start_session(dataset, config)
        except ConfigurationError as exc:
            raise ServiceError(400, "invalid_config", str(exc)) from None
        sid = state.store.add(session)
        return {"id": sid, "config": _config_echo(config), "dataset": dataset.name}

    @app.get("/api/sessions/{sid}/next")
    async def get_next(sid: str):
        session, lock = state.store.get(sid)
        with lock:
            try:
                point = next_query(session)
            except SessionComplete as exc:
                raise ServiceError(410, "complete", str(exc)) from None
            except PoolExhaustedError as exc:
                raise ServiceError(410, "pool_exhausted", str(exc)) from None
            trace = session.last_trace
            body = {
                "point": point,
                "posterior_row": session.model.posterior[point].tolist(),
                "subqueries_used": trace.subqueries_used if trace else 0,
                "progress": {
                    "answered": session.answered,
                    "budget": session.config.query_budget,
                },
            }
            if session.dataset.assets is not None:
                body["asset"] = session.dataset.assets[point]
            if trace is not None:
                body["trace"] = trace.to_json_dict()
            return body

    @app.post("/api/sessions/{sid}/labels")
    async def post_label(sid: str, body: dict):
        session, lock = state.store.get(sid)
        point = body.get("point")
        cls = body.get("class")
        if not isinstance(point, int) or not isinstance(cls, int):
            raise ServiceError(400, "invalid_body", "need integer point and class")
        with lock:
            if not 0 <= cls < session.dataset.class_count:
                raise ServiceError(
                    400,
                    "class_out_of_range",
                    f"class {cls} not in [0, {session.dataset.class_count})",
                )
            try:
                submit_label(session, point, cls)
            except OutOfOrderError as exc:
                raise ServiceError(409, "conflict", str(exc)) from None
            except SessionComplete as exc:
                raise ServiceError(410, "complete", str(exc)) from None
            if state.snapshot_dir is not None:
                _snapshot(session, sid, state.snapshot_dir)
            body_out = {"labeled_count": session.answered, "status": session.status}
            if session.curve.accuracies:
                body_out["curve_so_far"] = {
                    "accuracies": session.curve.accuracies,
                    "auc": auc(session.curve),
                }
            return body_out

    @app.get("/api/sessions/{sid}/state")
    async def get_state(sid: str):
        session, lock = state.store.get(sid)
        with lock:
            model = session.model
            confidence = model.posterior.max(axis=1)
            map_classes = model.posterior.argmax(axis=1)
            body = {
                "dataset": session.dataset.name,
                "config": _config_echo(session.config),
                "status": session.status,
                "labels": {
                    str(q.point): q.cls for q in session.query_log
                },
                "query_log": [
                    {"point": q.point, "class": q.cls, "timestamp": q.timestamp}
                    for q in session.query_log
                ],
                "map_classes": [int(c) for c in map_classes],
                "confidence": [float(c) for c in confidence],
                "posterior": [row.tolist() for row in model.posterior],
                "curve": {
                    "accuracies": session.curve.accuracies,
                    "auc": auc(session.curve) if session.curve.accuracies else None,
                },
                "features_2d": session.dataset.features[:, :2].tolist(),
                "class_count": session.dataset.class_count,
            }
            if session.dataset.class_names is not None:
                body["class_names"] = list(session.dataset.class_names)
            if session.tree is not None:
                body["tree"] = session.tree.to_json_dict()
            if session.last_trace is not None:
                body["trace"] = session.last_trace.to_json_dict()
            return body

    @app.get("/api/sessions/{sid}/export")
    async def get_export(sid: str):
        session, lock = state.store.get(sid)
        with lock:
            return curve_export(session.config, session.curve)

    @app.get("/api/datasets")
    async def list_datasets():
        return {
            "datasets": [
                {
                    "name": name,
                    "n": ds.n,
                    "q": ds.q,
                    "class_count": ds.class_count,
                    "has_labels": ds.labels is not None,
                }
                for name, ds in sorted(state.datasets.items())
            ]
        }

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
