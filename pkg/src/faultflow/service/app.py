"""Read-only FastAPI application serving one ingested workspace version.

Every response is derived solely from persisted artifacts; endpoints
backed one-to-one by a file stream that file's bytes unchanged, and
parametrized endpoints serialize through the same canonical encoder
used at ingest time.  No endpoint mutates anything.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from faultflow import jsonio
from faultflow.service import schemas
from faultflow.trace import FAULTY, GOLDEN
from faultflow.workspace import (
    VIEW_DIFF,
    VIEW_GLOBAL,
    NotFoundError,
    Workspace,
    WorkspaceError,
)


class BadRequestError(WorkspaceError):
    pass


def _json_bytes(payload: bytes) -> Response:
    return Response(content=payload, media_type="application/json")


def create_app(workspace_root: Path, frontend_dir: Path | None = None) -> FastAPI:
    """Build the service over the latest version in `workspace_root`."""
    workspace = Workspace.open(Path(workspace_root))
    app = FastAPI(title="faultflow analysis service", version="0.1.0")
    app.state.workspace = workspace

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"code": "not_found", "message": str(exc)})

    @app.exception_handler(BadRequestError)
    async def _bad_request(request: Request, exc: BadRequestError):
        return JSONResponse(status_code=400, content={"code": "bad_request", "message": str(exc)})

    @app.exception_handler(WorkspaceError)
    async def _workspace_error(request: Request, exc: WorkspaceError):
        return JSONResponse(status_code=500, content={"code": "workspace_error", "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={"code": "validation_error", "message": str(exc.errors())})

    @app.get("/api/runs", response_model=list[schemas.RunSummaryOut])
    def list_runs():
        return _json_bytes(workspace.runs_index_bytes())

    @app.get("/api/runs/{run_id}/functions", response_model=list[schemas.FunctionStatusOut])
    def run_functions(run_id: str):
        return _json_bytes(workspace.statuses_bytes(run_id))

    @app.get(
        "/api/runs/{run_id}/functions/{index}/graph",
        response_model=schemas.StyledGraphOut,
        response_model_by_alias=True,
    )
    def run_graph(
        run_id: str,
        index: int,
        threshold: int = Query(0, ge=0),
        view: str | None = Query(None, pattern="^(diff|global)$"),
    ):
        kind = _run_kind(workspace, run_id)
        if view is None:
            view = VIEW_DIFF if kind == FAULTY else VIEW_GLOBAL
        if view == VIEW_DIFF and kind == GOLDEN:
            raise BadRequestError(f"run {run_id!r} is the golden run; use view=global")
        return _json_bytes(jsonio.canonical_bytes(workspace.styled_json(run_id, index, threshold, view)))

    @app.get(
        "/api/campaign/cvg/{index}",
        response_model=schemas.StyledGraphOut,
        response_model_by_alias=True,
    )
    def campaign_cvg(index: int, threshold: int = Query(0, ge=0)):
        return _json_bytes(jsonio.canonical_bytes(workspace.styled_cvg_json(index, threshold)))

    @app.get("/api/campaign/ranking", response_model=list[schemas.RankingEntryOut], response_model_by_alias=True)
    def campaign_ranking(top: int = Query(10, ge=1)):
        ranking = json.loads(workspace.ranking_bytes())
        return _json_bytes(jsonio.canonical_bytes(ranking[:top]))

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="frontend")

    return app


def _run_kind(workspace: Workspace, run_id: str) -> str:
    for entry in workspace.runs_index():
        if entry["run_id"] == run_id:
            return entry["kind"]
    raise NotFoundError(f"no run {run_id!r} in workspace")
