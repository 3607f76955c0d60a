"""FastAPI application exposing the toolkit over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ToolkitError
from . import handlers, schemas

API_VERSION = "0.1.0"


def create_app() -> FastAPI:
    app = FastAPI(
        title="sqzkit service",
        description="Squeezed-light chain modelling, trace synthesis, "
                    "parameter fitting, loss budgets and entanglement checks.",
        version=API_VERSION,
    )

    @app.exception_handler(ToolkitError)
    async def toolkit_error_handler(_request: Request, exc: ToolkitError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": API_VERSION}

    @app.post("/model", response_model=schemas.ModelResponse)
    def model(request: schemas.ModelRequest) -> schemas.ModelResponse:
        return handlers.run_model(request)

    @app.post("/fit", response_model=schemas.FitResponse)
    def fit(request: schemas.FitRequest) -> schemas.FitResponse:
        return handlers.run_fit(request)

    @app.post("/trace", response_model=schemas.TraceResponse)
    def trace(request: schemas.TraceRequest) -> schemas.TraceResponse:
        return handlers.run_trace(request)

    @app.post("/budget", response_model=schemas.BudgetResponse)
    def budget(request: schemas.BudgetRequest) -> schemas.BudgetResponse:
        return handlers.run_budget(request)

    @app.post("/duan", response_model=schemas.DuanResponse)
    def duan(request: schemas.DuanRequest) -> schemas.DuanResponse:
        return handlers.run_duan(request)

    return app


app = create_app()
