"""FastAPI service exposing every capability to the CLI and the web UI.

Per-user scoping comes from the ``X-User-Id`` header (default "default");
errors map onto status codes: not found 404, schema/input violations 422,
storage outages 503, generator outages 502.
"""

from __future__ import annotations

import os

import numpy as np
from fastapi import Depends, FastAPI, File, Header, Request, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import errors
from ..analytics import compute_stats
from ..explainers import ExplanationResult, compare_methods, lime_explain, occlusion_explain, saliency_map
from ..faithfulness import scoring
from ..gateway import RegionMeanDetector
from ..publish import publish_explanation, publish_report, publish_saliency, rfc3339_now
from ..store import METADATA_BUCKET
from ..store.records import check_safe_id
from . import schemas
from .config import AppConfig, AppState, build_state

_STATUS_BY_ERROR: list[tuple[type[Exception], int]] = [
    (errors.NotFoundError, 404),
    (errors.BackendUnavailableError, 503),
    (errors.GeneratorUnavailableError, 502),
    (errors.SchemaViolationError, 422),
    (errors.MalformedCsvError, 422),
    (errors.MissingColumnError, 422),
    (errors.EmptyTextError, 422),
    (errors.DegenerateNeighbourhoodError, 422),
    (errors.SampleMismatchError, 422),
    (errors.PatchTooLargeError, 422),
]


def _status_for(exc: Exception) -> int:
    for error_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, error_type):
            return status
    return 422 if isinstance(exc, ValueError) else 500


def user_id_header(x_user_id: str = Header(default="default", alias="X-User-Id")) -> str:
    return check_safe_id(x_user_id, "user_id")


def create_app(config: AppConfig | None = None, state: AppState | None = None) -> FastAPI:
    state = state or build_state(config)
    app = FastAPI(title="xaidesk", version="0.1.0")
    app.state.xai = state

    @app.exception_handler(errors.XaideskError)
    async def xaidesk_error_handler(request: Request, exc: errors.XaideskError):
        return JSONResponse(status_code=_status_for(exc), content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def _get_row(user_id: str, dataset_id: str, row_id: int):
        handle = state.datasets.get_handle(user_id, dataset_id)
        if row_id < 0 or row_id >= len(handle.rows):
            raise errors.NotFoundError(f"row {row_id} in dataset {dataset_id}")
        return handle.rows[row_id]

    @app.post("/datasets", response_model=schemas.IngestResponse)
    def ingest(file: UploadFile = File(...), user_id: str = Depends(user_id_header)):
        raw = file.file.read()
        handle = state.datasets.ingest_dataset(user_id, raw)
        stats = compute_stats(handle, state.classifier)
        record = state.datasets.persist_summary(
            user_id, handle, stats, model_id=state.classifier.identifier
        )
        return schemas.IngestResponse(
            dataset_id=handle.dataset_id,
            n_rows=len(handle.rows),
            summary_artifact_id=record.artifact_id,
        )

    @app.get("/datasets/{dataset_id}/stats", response_model=schemas.StatsModel)
    def dataset_stats(dataset_id: str, user_id: str = Depends(user_id_header)):
        handle = state.datasets.get_handle(user_id, dataset_id)
        return compute_stats(handle, state.classifier).to_dict()

    @app.get("/datasets/{dataset_id}/samples", response_model=schemas.SamplesPage)
    def dataset_samples(
        dataset_id: str,
        offset: int = 0,
        limit: int = 20,
        user_id: str = Depends(user_id_header),
    ):
        handle = state.datasets.get_handle(user_id, dataset_id)
        page = handle.rows[offset : offset + limit]
        return schemas.SamplesPage(
            dataset_id=dataset_id,
            offset=offset,
            limit=limit,
            total=len(handle.rows),
            rows=[
                schemas.RowModel(row_id=r.row_id, text=r.text, asset=r.asset) for r in page
            ],
        )

    def _explain_response(record, result: ExplanationResult) -> schemas.ExplainResponse:
        return schemas.ExplainResponse(
            artifact_id=record.artifact_id,
            result=schemas.ExplanationModel(**result.to_dict()),
        )

    @app.post("/explain/occlusion", response_model=schemas.ExplainResponse)
    def explain_occlusion(
        body: schemas.ExplainOcclusionRequest, user_id: str = Depends(user_id_header)
    ):
        row = _get_row(user_id, body.dataset_id, body.row_id)
        result = occlusion_explain(
            state.classifier,
            row.text,
            target=body.target,
            sample_id=f"{body.dataset_id}:{body.row_id}",
            created_at=rfc3339_now(),
        )
        record = publish_explanation(state.store, state.index, user_id, result)
        return _explain_response(record, result)

    @app.post("/explain/lime", response_model=schemas.ExplainResponse)
    def explain_lime(body: schemas.ExplainLimeRequest, user_id: str = Depends(user_id_header)):
        row = _get_row(user_id, body.dataset_id, body.row_id)
        result = lime_explain(
            state.classifier,
            row.text,
            k=body.k,
            n_samples=body.n_samples,
            seed=body.seed,
            sample_id=f"{body.dataset_id}:{body.row_id}",
            created_at=rfc3339_now(),
        )
        record = publish_explanation(state.store, state.index, user_id, result)
        return _explain_response(record, result)

    @app.post("/explain/saliency", response_model=schemas.SaliencyResponse)
    def explain_saliency(body: schemas.SaliencyRequest, user_id: str = Depends(user_id_header)):
        image = np.array(body.image, dtype=float)
        detector = RegionMeanDetector()
        saliency = saliency_map(
            detector, image, patch_size=body.patch_size, stride=body.stride, fill=body.fill
        )
        record = publish_saliency(
            state.store, state.index, user_id, saliency, detector.identifier, body.sample_id
        )
        return schemas.SaliencyResponse(
            artifact_id=record.artifact_id,
            heat=saliency.heat.tolist(),
            patch_size=saliency.patch_size,
            stride=saliency.stride,
            baseline_confidence=saliency.baseline_confidence,
        )

    @app.get("/explain/compare", response_model=schemas.AgreementModel)
    def explain_compare(sample_id: str, k: int = 2, user_id: str = Depends(user_id_header)):
        found: dict[str, ExplanationResult] = {}
        for record in reversed(state.store.list_metadata(user_id)):
            method = {"text_occlusion": "occlusion", "text_lime": "lime"}.get(record.plot_type)
            if method is None or method in found or not record.payload_refs:
                continue
            result = ExplanationResult.from_json(state.store.get_blob(record.payload_refs[0]))
            if result.sample_id == sample_id:
                found[method] = result
            if len(found) == 2:
                break
        missing = {"occlusion", "lime"} - set(found)
        if missing:
            raise errors.NotFoundError(
                f"no {' or '.join(sorted(missing))} explanation stored for sample {sample_id}"
            )
        report = compare_methods(found["occlusion"], found["lime"], k)
        return schemas.AgreementModel(
            top_k_overlap=report.top_k_overlap,
            rank_correlation=report.rank_correlation,
            sign_agreement=report.sign_agreement,
            k=report.k,
        )

    @app.post("/chat", response_model=schemas.ChatResponseModel)
    def chat(body: schemas.ChatRequest, user_id: str = Depends(user_id_header)):
        response = state.engine.answer(
            user_id, body.question, strategy=body.strategy, generator=state.generator, k=body.k
        )
        audit = scoring.audit_response(
            response, truth=None, extra_vocabulary=scoring.stored_vocabulary(state.store, user_id)
        )
        return schemas.ChatResponseModel(
            text=response.text,
            cited_artifact_ids=response.cited_artifact_ids,
            strategy=response.strategy,
            retrieved=[schemas.RetrievedDocModel(**doc.to_dict()) for doc in response.retrieved],
            faithfulness=schemas.ResponseAudit(**audit),
        )

    @app.get("/artifacts", response_model=list[schemas.ArtifactModel])
    def list_artifacts(user_id: str = Depends(user_id_header)):
        return [record.to_dict() for record in state.store.list_metadata(user_id)]

    @app.get("/artifacts/{artifact_id}", response_model=schemas.ArtifactModel)
    def get_artifact(artifact_id: str, user_id: str = Depends(user_id_header)):
        return state.store.get_artifact(user_id, artifact_id).to_dict()

    @app.post("/admin/rehydrate", response_model=schemas.RehydrateResponse)
    def rehydrate(user_id: str = Depends(user_id_header)):
        return schemas.RehydrateResponse(count=state.rehydrator.rehydrate_if_empty(user_id))

    @app.post("/eval/faithfulness", response_model=schemas.EvalResponse)
    def eval_faithfulness(body: schemas.EvalRequest, user_id: str = Depends(user_id_header)):
        if body.queries is not None:
            queries = [
                scoring.EvalQuery(id=q.id, text=q.text, category=q.category)
                for q in body.queries
            ]
        else:
            queries = scoring.load_queries()
        report = scoring.run_eval_suite(
            queries,
            body.strategy,
            state.generator,
            user_id,
            engine=state.engine,
            truth=scoring.load_ground_truth(),
            extra_vocabulary=scoring.stored_vocabulary(state.store, user_id),
        )
        artifact_id = None
        if body.persist and report.complete:
            artifact_id = publish_report(
                state.store, state.index, user_id, report
            ).artifact_id
        return schemas.EvalResponse(report=report.to_dict(), artifact_id=artifact_id)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        try:
            state.backend.list_keys(METADATA_BUCKET, prefix="")
            reachable = True
        except errors.BackendUnavailableError:
            reachable = False
        return schemas.HealthResponse(
            status="ok" if reachable else "degraded",
            storage_reachable=reachable,
            index_sizes=state.index.sizes(),
        )

    ui_dir = os.environ.get("XAIDESK_UI_DIR", "frontend/static")
    if os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
