"""HTTP surface wrapping the workbench: one endpoint per command.

Reports come back verbatim (the same deterministic JSON the CLI writes),
with the CLI exit code included so thin clients can just forward it.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..dsl import ParseError
from ..povs import IterationCapError
from ..semilin import CapacityError
from ..workbench import COMMANDS, InputError, exit_code, run, run_search, to_text
from .models import AnalyzeRequest, HealthResponse, ReportResponse, SearchRequest


def _respond(report: dict) -> ReportResponse:
    return ReportResponse(exit_code=exit_code(report), report=report, text=to_text(report))


def create_app() -> FastAPI:
    app = FastAPI(
        title="povs-workbench",
        version=__version__,
        description="Exact-arithmetic analyses of pre-ordered vector spaces "
                    "with semi-linear positive wedges.",
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", name="povs-workbench", version=__version__)

    def make_handler(cmd: str):
        def handler(payload: AnalyzeRequest) -> ReportResponse:
            try:
                report = run(cmd, payload.source, cap=payload.cap, map_name=payload.map)
            except ParseError as e:
                raise HTTPException(status_code=400, detail={
                    "error": "parse", "message": e.message, "line": e.line, "column": e.col,
                })
            except InputError as e:
                raise HTTPException(status_code=400, detail={"error": "input", "message": str(e)})
            except CapacityError as e:
                raise HTTPException(status_code=422, detail={"error": "capacity", "message": str(e)})
            except IterationCapError as e:
                raise HTTPException(status_code=422, detail={"error": "iteration-cap", "message": str(e)})
            return _respond(report)
        handler.__name__ = f"run_{cmd}"
        return handler

    for cmd in COMMANDS:
        app.post(f"/{cmd}", response_model=ReportResponse)(make_handler(cmd))

    @app.post("/search", response_model=ReportResponse)
    def search(payload: SearchRequest) -> ReportResponse:
        try:
            report = run_search(payload.dim, payload.cases, payload.seed, cap=payload.cap)
        except InputError as e:
            raise HTTPException(status_code=400, detail={"error": "input", "message": str(e)})
        except CapacityError as e:
            raise HTTPException(status_code=422, detail={"error": "capacity", "message": str(e)})
        return _respond(report)

    return app


app = create_app()
