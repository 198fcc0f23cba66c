"""HTTP access to the engine: versioned model edits, retrieval, evaluation.

One service instance owns one project: a similarity model snapshot, named
case bases and an append-only edit log, all persisted in a project directory.
Reads are lock-free against the latest committed snapshot; mutations are
serialized through a single writer lock and either commit a full new snapshot
(version + 1, model file rewritten atomically) or leave state untouched.
Mutating requests must cite the version they were based on; a stale version
is answered with 409 instead of silently merging.
"""

from __future__ import annotations

import io
import json
import os
import re
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from . import documents
from .charts import build_chart_set, measure_preview
from .errors import (
    DocumentError,
    EngineError,
    IngestionError,
    ModelValidationError,
    ValidationError,
)
from .evaluation import cross_validate
from .ingestion import load_csv, starter_model, summarize
from .model import Case, PolynomialMeasure, SimilarityModel, validate_model
from .retrieval import CaseBase, RetrievalResult, check_compatible, retrieve

API_PREFIX = "/api/v1"

_NAME_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class VersionConflict(EngineError):
    def __init__(self, cited: int, current: int):
        super().__init__(
            f"edit cites model version {cited}, but the current version is {current}"
        )
        self.cited = cited
        self.current = current


@dataclass(frozen=True)
class EditLogEntry:
    version: int
    timestamp: str
    summary: str


class Project:
    """Persistent project state with copy-on-write model snapshots."""

    def __init__(self, directory: Path):
        self.directory = directory
        self.model = SimilarityModel.empty()
        self.casebases: dict[str, CaseBase] = {}
        self.edit_log: list[EditLogEntry] = []
        self.last_retrieval: RetrievalResult | None = None
        self._write_lock = threading.Lock()

    @classmethod
    def open(cls, directory: str | Path) -> "Project":
        """Load a project directory; an empty directory is a fresh project."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        project = cls(directory)

        model_path = directory / "model.json"
        if model_path.exists():
            model = documents.model_from_doc(documents.loads(model_path.read_text("utf-8")))
            violations = validate_model(model)
            if violations:
                raise ModelValidationError(
                    f"project model at {model_path} is invalid", violations
                )
            project.model = model

        casebase_dir = directory / "casebases"
        if casebase_dir.is_dir():
            for path in sorted(casebase_dir.glob("*.json")):
                base = documents.casebase_from_doc(documents.loads(path.read_text("utf-8")))
                project.casebases[base.name] = base
        return project

    # -- mutations (call under the writer lock) -------------------------------

    def lock(self) -> threading.Lock:
        return self._write_lock

    def commit_model(self, model: SimilarityModel, summary: str) -> None:
        """Persist a new snapshot atomically, then publish it to readers."""
        _atomic_write(self.directory / "model.json", documents.dumps(documents.model_to_doc(model)))
        entry = EditLogEntry(
            version=model.version,
            timestamp=datetime.now(timezone.utc).isoformat(),
            summary=summary,
        )
        with open(self.directory / "edit-log.jsonl", "a", encoding="utf-8") as log:
            log.write(json.dumps(entry.__dict__) + "\n")
        self.edit_log.append(entry)
        self.model = model

    def store_casebase(self, base: CaseBase) -> None:
        casebase_dir = self.directory / "casebases"
        casebase_dir.mkdir(exist_ok=True)
        _atomic_write(
            casebase_dir / f"{base.name}.json",
            documents.dumps(documents.casebase_to_doc(base)),
        )
        self.casebases[base.name] = base


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _bootstrap_model(current: SimilarityModel, base: CaseBase) -> SimilarityModel:
    """First ingested dataset seeds the model: suggested measures, equal weights."""
    seeded = starter_model(base)
    return replace(seeded, version=current.version + 1)


def create_app(project: Project, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="casewise", version="0.1.0")
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(ValidationError)
    async def _validation_handler(_request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": str(exc), "violations": [v.to_doc() for v in exc.violations]},
        )

    @app.exception_handler(DocumentError)
    async def _document_handler(_request: Request, exc: DocumentError):
        return JSONResponse(status_code=422, content={"error": str(exc), "violations": []})

    @app.exception_handler(IngestionError)
    async def _ingestion_handler(_request: Request, exc: IngestionError):
        return JSONResponse(
            status_code=422,
            content={"error": str(exc), "violations": [], "row": exc.row, "column": exc.column},
        )

    @app.exception_handler(VersionConflict)
    async def _conflict_handler(_request: Request, exc: VersionConflict):
        return JSONResponse(
            status_code=409,
            content={"error": str(exc), "cited_version": exc.cited, "current_version": exc.current},
        )

    def _casebase_or_404(name: str) -> CaseBase:
        base = project.casebases.get(name)
        if base is None:
            raise HTTPException(status_code=404, detail=f"no case base named {name!r}")
        return base

    # -- model ----------------------------------------------------------------

    @app.get(f"{API_PREFIX}/model")
    def get_model() -> dict:
        return documents.model_to_doc(project.model)

    @app.put(f"{API_PREFIX}/model")
    def put_model(payload: dict) -> dict:
        candidate = documents.model_from_doc(payload)
        with project.lock():
            current = project.model
            if candidate.version != current.version:
                raise VersionConflict(candidate.version, current.version)
            committed = replace(candidate, version=current.version + 1)
            violations = validate_model(committed)
            if violations:
                raise ModelValidationError("model rejected", violations)
            project.commit_model(committed, "model replaced")
        return documents.model_to_doc(project.model)

    @app.put(f"{API_PREFIX}/model/measures/{{attribute}}")
    def put_measure(attribute: str, payload: dict) -> dict:
        measure_doc = dict(_field(payload, "measure"))
        measure_doc.setdefault("attribute", attribute)
        if measure_doc["attribute"] != attribute:
            raise ValidationError(
                f"measure is for {measure_doc['attribute']!r} but the path names {attribute!r}"
            )
        measure = documents.measure_from_doc(measure_doc)
        with project.lock():
            current = project.model
            _check_version(payload, current)
            if all(d.name != attribute for d in current.schema):
                raise HTTPException(status_code=404, detail=f"unknown attribute {attribute!r}")
            candidate = current.with_measure(measure)
            violations = validate_model(candidate)
            if violations:
                raise ModelValidationError("measure rejected", violations)
            project.commit_model(candidate, f"measure {attribute} updated")
        return documents.model_to_doc(project.model)

    @app.put(f"{API_PREFIX}/model/weights")
    def put_weights(payload: dict) -> dict:
        weights = _field(payload, "weights")
        with project.lock():
            current = project.model
            _check_version(payload, current)
            candidate = current.with_weights(weights)
            violations = validate_model(candidate)
            if violations:
                raise ModelValidationError("weights rejected", violations)
            project.commit_model(candidate, "weights updated")
        return documents.model_to_doc(project.model)

    # -- case bases -------------------------------------------------------------

    @app.get(f"{API_PREFIX}/casebases")
    def list_casebases() -> dict:
        return {
            "model_version": project.model.version,
            "casebases": [
                {"name": name, "cases": len(base)}
                for name, base in sorted(project.casebases.items())
            ],
        }

    @app.post(f"{API_PREFIX}/casebases")
    async def upload_casebase(
        request: Request,
        name: str,
        solution: str,
        zeroMissing: str = "",
    ) -> dict:
        if not _NAME_RE.match(name):
            raise ValidationError(
                f"case base name {name!r} must match {_NAME_RE.pattern}"
            )
        body = await request.body()
        if not body:
            raise IngestionError("empty file")
        columns = [c for c in zeroMissing.split(",") if c]
        _schema, base = load_csv(
            io.BytesIO(body), solution=solution, zero_missing=columns, name=name
        )
        with project.lock():
            current = project.model
            if current.schema:
                check_compatible(current, base)
                model_version = current.version
            else:
                seeded = _bootstrap_model(current, base)
                violations = validate_model(seeded)
                if violations:
                    raise ModelValidationError("ingested schema is invalid", violations)
                project.commit_model(seeded, f"model seeded from case base {name}")
                model_version = seeded.version
            project.store_casebase(base)
        return {"name": base.name, "cases": len(base), "model_version": model_version}

    @app.get(f"{API_PREFIX}/casebases/{{name}}/summary/{{attribute}}")
    def casebase_summary(
        name: str, attribute: str, bins: int = 20, groupBySolution: bool = False
    ) -> dict:
        base = _casebase_or_404(name)
        summary = summarize(base, attribute, bins=bins, group_by_solution=groupBySolution)
        doc = documents.summary_to_doc(summary)
        doc["model_version"] = project.model.version
        return doc

    # -- retrieval, evaluation, charts --------------------------------------------

    @app.post(f"{API_PREFIX}/retrieval")
    def post_retrieval(payload: dict) -> dict:
        model = project.model  # one snapshot for the whole request
        base = _casebase_or_404(_field(payload, "casebase"))
        query = Case(id="query", values=dict(_field(payload, "query")))
        k = int(payload.get("k", 5))
        result = retrieve(model, base, query, k)
        project.last_retrieval = result
        return documents.result_to_doc(result)

    @app.post(f"{API_PREFIX}/evaluation")
    def post_evaluation(payload: dict) -> dict:
        model = project.model
        base = _casebase_or_404(_field(payload, "casebase"))
        report = cross_validate(
            model,
            base,
            k=int(payload.get("k", 5)),
            folds=int(payload.get("folds", 10)),
            seed=int(payload.get("seed", 0)),
        )
        return documents.report_to_doc(report)

    @app.get(f"{API_PREFIX}/charts/decomposition")
    def charts_decomposition(top: int = 3) -> dict:
        result = project.last_retrieval
        if result is None:
            raise HTTPException(status_code=404, detail="no retrieval has been run yet")
        return documents.chart_set_to_doc(build_chart_set(result, top))

    @app.get(f"{API_PREFIX}/measures/{{attribute}}/preview")
    def measure_curve(attribute: str, samples: int = 50, degree: float | None = None) -> dict:
        # `degree` previews an uncommitted polynomial draft, so the editor can
        # re-render the curve while dragging without doing any math client-side
        model = project.model
        descriptor = next((d for d in model.schema if d.name == attribute), None)
        if descriptor is None:
            raise HTTPException(status_code=404, detail=f"unknown attribute {attribute!r}")
        if degree is not None:
            if degree <= 0:
                raise ValidationError(f"preview degree must be > 0, got {degree}")
            measure: object = PolynomialMeasure(attribute=attribute, degree=degree)
        else:
            measure = model.measure_for(attribute)
        points = measure_preview(measure, descriptor, samples)
        reference = (descriptor.minimum + descriptor.maximum) / 2.0
        doc = documents.preview_to_doc(attribute, reference, points)
        doc["model_version"] = model.version
        return doc

    return app


def _field(payload: dict, key: str) -> Any:
    if key not in payload:
        raise ValidationError(f"request body is missing {key!r}")
    return payload[key]


def _check_version(payload: dict, current: SimilarityModel) -> None:
    cited = _field(payload, "version")
    if cited != current.version:
        raise VersionConflict(cited, current.version)


def serve(
    project_dir: str | Path,
    host: str = "127.0.0.1",
    port: int = 8411,
    ui_dir: str | Path | None = None,
) -> None:
    """Run the service against a project directory (blocking)."""
    import uvicorn

    project = Project.open(project_dir)
    app = create_app(project, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
