"""HTTP facade over the explanation pipeline.

Endpoints: GET /datasets, POST /sessions, POST /sessions/{id}/explain,
GET /sessions/{id}/resample. Sessions live in memory with TTL eviction;
fitted models are cached per (dataset, family, seed) and shared across
sessions. An /explain response is a pure function of the model
fingerprint, the point, the desired class and the attribution config,
so replays are byte-identical.
"""

from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .classifiers import FAMILIES, fit
from .contrastive import build_contrastive
from .counterfactual import NeighborIndex, find_counterfactuals
from .data import Dataset, load_builtin, builtin_names, split, standardize
from .errors import NoCounterfactualError
from .shapley import ShapleyConfig, ValueFunctionSpec, attribute, select_background

DEFAULT_PORT = 8000
DEFAULT_SEED = 42
SESSION_TTL_SECONDS = 30 * 60


def resolve_port(cli_port: int | None) -> int:
    if cli_port is not None:
        return cli_port
    env = os.environ.get("CFSHAP_PORT")
    return int(env) if env else DEFAULT_PORT


class ApiError(Exception):
    """Error carrying HTTP status and the {code, message, detail?} body."""

    def __init__(self, status: int, code: str, message: str, detail: str | None = None,
                 headers: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        self.headers = headers or {}

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.detail is not None:
            body["detail"] = self.detail
        return JSONResponse(body, status_code=self.status, headers=self.headers)


@dataclass
class _PreparedDataset:
    """Raw dataset plus the standardized view and training-side artifacts."""

    raw: Dataset
    std: Dataset
    split: object
    X_train: np.ndarray
    y_train: np.ndarray
    index: NeighborIndex


@dataclass
class _Session:
    id: str
    dataset: str
    family: str
    seed: int
    model_fingerprint: str
    point_index: int
    predicted: int
    created_at: float
    draws: int = 0


class _ModelCache:
    """Lazily trained models keyed by (dataset, family, seed).

    While one thread trains a key, concurrent requests for the same key
    get a retry-later signal instead of blocking behind the fit.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._models: dict = {}
        self._training: set = set()

    def get_or_train(self, key, train_fn):
        with self._lock:
            if key in self._models:
                return self._models[key]
            if key in self._training:
                raise ApiError(
                    503,
                    "training_in_progress",
                    "the model for this configuration is still training",
                    headers={"Retry-After": "1"},
                )
            self._training.add(key)
        try:
            model = train_fn()
        except BaseException:
            with self._lock:
                self._training.discard(key)
            raise
        with self._lock:
            self._models[key] = model
            self._training.discard(key)
        return model


def _train_model(prepared: _PreparedDataset, family: str, seed: int):
    return fit(
        family,
        prepared.X_train,
        prepared.y_train,
        seed=seed,
        n_classes=prepared.raw.n_classes,
    )


def _default_static_dir() -> Path | None:
    env = os.environ.get("CFSHAP_STATIC")
    if env:
        return Path(env)
    # repo layout: <root>/src/cfshap/service.py and <root>/frontend/dist
    repo_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return repo_dist if repo_dist.is_dir() else None


def create_app(
    dataset_names: tuple[str, ...] | None = None,
    seed: int = DEFAULT_SEED,
    session_ttl: float = SESSION_TTL_SECONDS,
    shapley_config: ShapleyConfig | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the service application with its own caches and registry."""
    app = FastAPI(title="cfshap explanation service")
    names = builtin_names() if dataset_names is None else dataset_names
    default_shap = shapley_config or ShapleyConfig(
        mode="auto", n_permutations=2000, seed=seed, background_per_permutation=4
    )

    prepared: dict[str, _PreparedDataset] = {}
    prepared_lock = threading.Lock()
    sessions: dict[str, _Session] = {}
    sessions_lock = threading.Lock()
    models = _ModelCache()
    backgrounds: dict = {}

    def get_prepared(name: str) -> _PreparedDataset:
        if name not in names:
            raise ApiError(404, "dataset_not_found", f"unknown dataset {name!r}")
        with prepared_lock:
            if name not in prepared:
                raw = load_builtin(name)
                the_split = split(raw, 0.8, seed, stratified=True)
                std = standardize(raw, the_split)
                X_train = std.points[the_split.train_indices]
                y_train = std.labels[the_split.train_indices]
                prepared[name] = _PreparedDataset(
                    raw=raw,
                    std=std,
                    split=the_split,
                    X_train=X_train,
                    y_train=y_train,
                    index=NeighborIndex(X_train),
                )
            return prepared[name]

    def get_background(name: str, prep: _PreparedDataset) -> np.ndarray:
        with prepared_lock:
            if name not in backgrounds:
                backgrounds[name] = select_background(
                    prep.X_train, prep.y_train, default_shap.background_size, seed
                )
            return backgrounds[name]

    def evict_stale(now: float) -> None:
        with sessions_lock:
            stale = [sid for sid, s in sessions.items() if now - s.created_at > session_ttl]
            for sid in stale:
                del sessions[sid]

    def get_session(sid: str) -> _Session:
        evict_stale(time.time())
        with sessions_lock:
            session = sessions.get(sid)
        if session is None:
            raise ApiError(404, "session_not_found", f"no session {sid!r}")
        return session

    def sample_test_point(prep: _PreparedDataset, seed_value: int, draw: int) -> int:
        rng = np.random.default_rng((seed_value, draw))
        return int(rng.choice(prep.split.test_indices))

    def point_payload(prep: _PreparedDataset, point_index: int, model) -> dict:
        std_point = prep.std.points[point_index]
        raw_values = prep.std.to_raw(std_point)
        proba = model.predict_proba(std_point)
        predicted = model.predict(std_point)
        return {
            "point": {
                "index": int(point_index),
                "values": [float(v) for v in raw_values],
                "feature_names": list(prep.raw.feature_names),
            },
            "predicted": int(predicted),
            "predicted_class_name": prep.raw.class_names[int(predicted)],
            "probabilities": [float(p) for p in proba],
            "class_names": list(prep.raw.class_names),
        }

    @app.exception_handler(ApiError)
    async def _api_error_handler(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            {"code": "invalid_request", "message": "invalid request body", "detail": str(exc)},
            status_code=400,
        )

    @app.get("/datasets")
    def list_datasets():
        out = []
        for name in names:
            prep = get_prepared(name)
            out.append(
                {
                    "name": name,
                    "d": prep.raw.n_features,
                    "C": prep.raw.n_classes,
                    "class_names": list(prep.raw.class_names),
                    "sizes": {
                        "total": prep.raw.n_points,
                        "train": int(prep.split.train_indices.size),
                        "test": int(prep.split.test_indices.size),
                    },
                }
            )
        return out

    @app.post("/sessions")
    def create_session(body: dict):
        name = body.get("dataset")
        family = body.get("model")
        if not isinstance(name, str):
            raise ApiError(400, "invalid_request", "body must name a dataset")
        if family not in FAMILIES:
            raise ApiError(
                400, "unknown_model", f"model must be one of {', '.join(FAMILIES)}"
            )
        session_seed = body.get("seed", seed)
        if not isinstance(session_seed, int) or session_seed < 0:
            raise ApiError(400, "invalid_request", "seed must be a non-negative integer")
        prep = get_prepared(name)
        model = models.get_or_train(
            (name, family, session_seed), lambda: _train_model(prep, family, session_seed)
        )
        point_index = sample_test_point(prep, session_seed, 0)
        session = _Session(
            id=uuid.uuid4().hex,
            dataset=name,
            family=family,
            seed=session_seed,
            model_fingerprint=model.training_fingerprint,
            point_index=point_index,
            predicted=model.predict(prep.std.points[point_index]),
            created_at=time.time(),
        )
        with sessions_lock:
            sessions[session.id] = session
        payload = {
            "id": session.id,
            "dataset": name,
            "model": family,
            "model_fingerprint": session.model_fingerprint,
            "seed": session_seed,
            "created_at": session.created_at,
        }
        payload.update(point_payload(prep, point_index, model))
        return payload

    @app.get("/sessions/{sid}/resample")
    def resample(sid: str):
        session = get_session(sid)
        prep = get_prepared(session.dataset)
        model = models.get_or_train(
            (session.dataset, session.family, session.seed),
            lambda: _train_model(prep, session.family, session.seed),
        )
        session.draws += 1
        session.point_index = sample_test_point(prep, session.seed, session.draws)
        session.predicted = model.predict(prep.std.points[session.point_index])
        payload = {"id": session.id}
        payload.update(point_payload(prep, session.point_index, model))
        return payload

    @app.post("/sessions/{sid}/explain")
    def explain(sid: str, body: dict):
        session = get_session(sid)
        desired = body.get("desired")
        prep = get_prepared(session.dataset)
        if not isinstance(desired, int) or not 0 <= desired < prep.raw.n_classes:
            raise ApiError(
                400,
                "invalid_request",
                f"desired must be a class id in 0..{prep.raw.n_classes - 1}",
            )
        if desired == session.predicted:
            raise ApiError(
                409,
                "not_contrastive",
                "desired class equals the predicted class",
                detail=f"predicted={session.predicted}",
            )
        model = models.get_or_train(
            (session.dataset, session.family, session.seed),
            lambda: _train_model(prep, session.family, session.seed),
        )
        background = get_background(session.dataset, prep)
        spec = ValueFunctionSpec(model=model, background=background)
        point = prep.std.points[session.point_index]
        sv = attribute(spec, point, default_shap)
        explanation = build_contrastive(
            sv, session.predicted, desired, prep.raw.feature_names
        )
        try:
            result = find_counterfactuals(model, point, desired, sv, prep.index)
            counterfactuals = [
                [float(v) for v in prep.std.to_raw(row)] for row in result.points
            ]
            is_fallback = bool(result.is_fallback)
            fallback_point = (
                [float(v) for v in prep.std.to_raw(result.fallback_point)]
                if result.fallback_point is not None
                else None
            )
            budget = int(result.neighbor_budget_used)
        except NoCounterfactualError:
            counterfactuals = []
            is_fallback = True
            fallback_point = None
            budget = 0
        return {
            "why_p": [[name, value] for name, value in explanation.why_p],
            "not_q": [[name, value] for name, value in explanation.not_q],
            "nl_why_p": explanation.nl_why_p,
            "nl_not_q": explanation.nl_not_q,
            "shapley": {
                "phi": [[float(v) for v in row] for row in sv.phi],
                "base_values": [float(v) for v in sv.base_values],
                "method": {
                    "kind": sv.method.kind,
                    "n_permutations": sv.method.n_permutations,
                    "seed": sv.method.seed,
                },
            },
            "counterfactuals": counterfactuals,
            "is_fallback": is_fallback,
            "fallback_point": fallback_point,
            "neighbor_budget_used": budget,
        }

    static = Path(static_dir) if static_dir is not None else _default_static_dir()
    if static is not None and static.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static, html=True), name="dashboard")

    return app


def run(port: int | None = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=resolve_port(port))
