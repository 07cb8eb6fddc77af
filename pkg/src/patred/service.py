"""HTTP facade over the search core.

A small FastAPI app with an in-memory session store (optionally
snapshotted to a directory): upload series as CSV, submit sketched
patterns as point lists, run searches, and read back polar similarity
coordinates for a stored result. Computation is pure and seeded, so
identical requests against identical stored objects return
byte-identical bodies.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .core import Pattern, TimeSeries, parse_csv_text, to_pointset
from .errors import CapabilityError, DataFormatError, ValidationError
from .metrics import MetricId, Mode, canonical_mode
from .mid import mid_point_guarded, reference_point
from .raster import DEFAULT_BINS, rasterize
from .redundancy import (
    DEFAULT_COPIES,
    DEFAULT_SHIFT,
    RedundancyConfig,
    RedundancyKind,
    apply as apply_redundancy,
)
from .search import SearchRequest, search

DEFAULT_SIZE_CAP = 10_000_000
PREVIEW_LIMIT = 10


# ---------------------------------------------------------------------------
# Request / response schema
# ---------------------------------------------------------------------------

class DatasetCreated(BaseModel):
    id: int
    length: int
    preview: list[float]


class DatasetDetail(BaseModel):
    id: int
    name: str
    length: int
    values: list[float]
    labels: list[str] | None = None


class PatternBody(BaseModel):
    name: str = ""
    points: list[list[float]]


class PatternCreated(BaseModel):
    id: int
    point_count: int
    reordered: bool


class PatternDetail(BaseModel):
    id: int
    name: str
    points: list[list[float]]


class RedundancyBody(BaseModel):
    kind: str = "none"
    n_points: int = 0
    copies: int = DEFAULT_COPIES
    shift: float = DEFAULT_SHIFT
    eta: float = 0.1
    seed: int = 0


class SearchBody(BaseModel):
    pattern_id: int
    dataset_id: int
    metric: str = "nmi"
    redundancy: RedundancyBody = Field(default_factory=RedundancyBody)
    b: int = DEFAULT_BINS
    stride: int = 1
    top_k: int = 9
    exclusion: int | None = None
    window_length: int | None = None
    mode: str | None = None


class MatchBody(BaseModel):
    start_index: int
    distance: float
    rank: int
    window: list[float]


class SearchResponse(BaseModel):
    result_id: int
    metric: str
    mode: str
    matches: list[MatchBody]


class MidPointBody(BaseModel):
    label: str
    radius: float
    angle: float
    x: float
    y: float


class MidResponse(BaseModel):
    result_id: int
    points: list[MidPointBody]


# ---------------------------------------------------------------------------
# Store
# ---------------------------------------------------------------------------

class SessionStore:
    """Sequential-id object store, optionally persisted as one JSON file."""

    def __init__(self, data_dir: str | Path | None = None):
        self._lock = threading.Lock()
        self._datasets: dict[int, dict] = {}
        self._patterns: dict[int, dict] = {}
        self._results: dict[int, dict] = {}
        self._next = {"dataset": 1, "pattern": 1, "result": 1}
        self._path = Path(data_dir) / "store.json" if data_dir else None
        if self._path and self._path.exists():
            self._load()

    def _load(self) -> None:
        snapshot = json.loads(self._path.read_text())
        self._datasets = {int(k): v for k, v in snapshot["datasets"].items()}
        self._patterns = {int(k): v for k, v in snapshot["patterns"].items()}
        self._results = {int(k): v for k, v in snapshot["results"].items()}
        self._next = snapshot["next"]

    def _persist(self) -> None:
        if self._path is None:
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps({
            "datasets": self._datasets,
            "patterns": self._patterns,
            "results": self._results,
            "next": self._next,
        }))
        os.replace(tmp, self._path)

    def _allocate(self, kind: str) -> int:
        new_id = self._next[kind]
        self._next[kind] = new_id + 1
        return new_id

    def add_dataset(self, name: str, series: TimeSeries) -> int:
        with self._lock:
            new_id = self._allocate("dataset")
            self._datasets[new_id] = {
                "name": name,
                "values": series.values.tolist(),
                "labels": list(series.labels) if series.labels else None,
            }
            self._persist()
            return new_id

    def dataset(self, dataset_id: int) -> tuple[str, TimeSeries]:
        entry = self._datasets.get(dataset_id)
        if entry is None:
            raise HTTPException(404, f"no dataset with id {dataset_id}")
        labels = tuple(entry["labels"]) if entry["labels"] else None
        return entry["name"], TimeSeries(np.array(entry["values"]), labels)

    def add_pattern(self, pattern: Pattern) -> int:
        with self._lock:
            new_id = self._allocate("pattern")
            self._patterns[new_id] = {
                "name": pattern.name,
                "points": pattern.points.tolist(),
            }
            self._persist()
            return new_id

    def pattern(self, pattern_id: int) -> Pattern:
        entry = self._patterns.get(pattern_id)
        if entry is None:
            raise HTTPException(404, f"no pattern with id {pattern_id}")
        return Pattern(np.array(entry["points"]), name=entry["name"])

    def add_result(self, payload: dict) -> int:
        with self._lock:
            new_id = self._allocate("result")
            self._results[new_id] = payload
            self._persist()
            return new_id

    def result(self, result_id: int) -> dict:
        entry = self._results.get(result_id)
        if entry is None:
            raise HTTPException(404, f"no result with id {result_id}")
        return entry


# ---------------------------------------------------------------------------
# App factory
# ---------------------------------------------------------------------------

def create_app(data_dir: str | Path | None = None,
               size_cap: int = DEFAULT_SIZE_CAP) -> FastAPI:
    app = FastAPI(title="patred", version="1.0.0",
                  description="Sketch-driven pattern search in time series "
                              "with redundancy-augmented chart similarity.")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(data_dir)
    app.state.store = store

    @app.post("/datasets", status_code=201, response_model=DatasetCreated)
    async def create_dataset(request: Request, name: str = "",
                             value_column: str | None = None) -> DatasetCreated:
        body = (await request.body()).decode("utf-8", errors="replace")
        if not body.strip():
            raise HTTPException(400, "empty body; expected CSV text")
        try:
            series = parse_csv_text(body, value_column, origin="request body")
        except (DataFormatError, ValidationError) as exc:
            raise HTTPException(400, str(exc)) from None
        dataset_id = store.add_dataset(name or f"dataset-{len(body)}", series)
        preview = [float(v) for v in series.values[:PREVIEW_LIMIT]]
        return DatasetCreated(id=dataset_id, length=len(series),
                              preview=preview)

    @app.get("/datasets/{dataset_id}", response_model=DatasetDetail)
    def get_dataset(dataset_id: int) -> DatasetDetail:
        name, series = store.dataset(dataset_id)
        return DatasetDetail(
            id=dataset_id, name=name, length=len(series),
            values=[float(v) for v in series.values],
            labels=list(series.labels) if series.labels else None,
        )

    @app.post("/patterns", status_code=201, response_model=PatternCreated)
    def create_pattern(body: PatternBody) -> PatternCreated:
        points = np.asarray(body.points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] < 2:
            raise HTTPException(400, "need at least 2 [x, y] points")
        order = np.argsort(points[:, 0], kind="stable")
        reordered = bool(np.any(order != np.arange(len(points))))
        try:
            pattern = Pattern(points[order], name=body.name)
        except ValidationError as exc:
            raise HTTPException(400, str(exc)) from None
        pattern_id = store.add_pattern(pattern)
        return PatternCreated(id=pattern_id, point_count=len(pattern),
                              reordered=reordered)

    @app.get("/patterns/{pattern_id}", response_model=PatternDetail)
    def get_pattern(pattern_id: int) -> PatternDetail:
        pattern = store.pattern(pattern_id)
        return PatternDetail(id=pattern_id, name=pattern.name,
                             points=pattern.points.tolist())

    @app.post("/search", response_model=SearchResponse)
    def run_search(body: SearchBody) -> SearchResponse:
        pattern = store.pattern(body.pattern_id)
        _, series = store.dataset(body.dataset_id)
        try:
            metric = MetricId.parse(body.metric)
            config = RedundancyConfig(
                kind=RedundancyKind.parse(body.redundancy.kind),
                n_points=body.redundancy.n_points,
                copies=body.redundancy.copies,
                shift=body.redundancy.shift,
                eta=body.redundancy.eta,
                seed=body.redundancy.seed,
            )
            mode = Mode(body.mode) if body.mode else None
        except (ValidationError, ValueError) as exc:
            raise HTTPException(422, str(exc)) from None

        window = body.window_length or len(pattern)
        if window <= len(series) and body.stride >= 1:
            n_windows = (len(series) - window) // body.stride + 1
            if n_windows * body.b * body.b > size_cap:
                raise HTTPException(
                    413,
                    f"search size {n_windows} windows x {body.b}^2 cells "
                    f"exceeds the cap of {size_cap}; raise the stride or "
                    f"lower the bin count",
                )
        try:
            request = SearchRequest(
                pattern=pattern, series=series, metric=metric,
                redundancy=config, b=body.b, stride=body.stride,
                top_k=body.top_k, exclusion=body.exclusion,
                window_length=body.window_length, mode=mode,
            )
            matches = search(request)
        except CapabilityError as exc:
            raise HTTPException(422, str(exc)) from None
        except ValidationError as exc:
            raise HTTPException(422, str(exc)) from None

        resolved_mode = (mode or canonical_mode(metric)).value
        result_id = store.add_result({
            "pattern_id": body.pattern_id,
            "dataset_id": body.dataset_id,
            "metric": metric.value,
            "mode": resolved_mode,
            "b": body.b,
            "redundancy": config.to_dict(),
            "window_length": window,
            "matches": [m.to_dict() for m in matches],
        })
        return SearchResponse(
            result_id=result_id, metric=metric.value, mode=resolved_mode,
            matches=[MatchBody(**m.to_dict()) for m in matches],
        )

    @app.get("/results/{result_id}", response_model=SearchResponse)
    def get_result(result_id: int) -> SearchResponse:
        entry = store.result(result_id)
        return SearchResponse(
            result_id=result_id, metric=entry["metric"], mode=entry["mode"],
            matches=[MatchBody(**m) for m in entry["matches"]],
        )

    @app.get("/results/{result_id}/mid", response_model=MidResponse)
    def get_mid(result_id: int) -> MidResponse:
        entry = store.result(result_id)
        pattern = store.pattern(entry["pattern_id"])
        if len(pattern) != entry["window_length"]:
            pattern = pattern.resample(entry["window_length"])
        config = RedundancyConfig.from_dict(entry["redundancy"])
        b = entry["b"]
        reference_img = rasterize(
            apply_redundancy(to_pointset(pattern), config), b)
        points = [reference_point(reference_img)]
        for match in entry["matches"]:
            candidate_img = rasterize(apply_redundancy(
                to_pointset(np.asarray(match["window"])), config), b)
            points.append(mid_point_guarded(
                reference_img, candidate_img, label=f"rank{match['rank']}"))
        return MidResponse(
            result_id=result_id,
            points=[MidPointBody(**p.to_dict()) for p in points],
        )

    return app


def write_openapi(path: str | Path) -> Path:
    """Dump the API description (sorted keys, stable across runs)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    schema = create_app().openapi()
    path.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n")
    return path
