"""FastAPI application exposing the handlers over HTTP.

Domain errors (QeacError subclasses and ValueError) map to 400 responses
carrying the exception class name; schema violations are FastAPI's usual
422. All computation happens synchronously in the handlers.
"""
from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import QeacError
from . import handlers
from .models import (
    CodesResponse,
    DecodeRequest,
    DecodeResponse,
    EncodeRequest,
    EncodeResponse,
    ErrorResponse,
    EvolveRequest,
    EvolveResponse,
    HealthResponse,
    SweepRequest,
    SweepResponse,
    TableResponse,
    TrajectoriesRequest,
    TrajectoriesResponse,
    VerifyRequest,
    VerifyResponse,
)

__all__ = ["app", "create_app"]


def create_app() -> FastAPI:
    app = FastAPI(
        title="Collective amplitude damping codes",
        version=__version__,
        description=(
            "Dark-state code tables, codewords, verification, and "
            "master-equation / quantum-trajectory simulations."
        ),
    )

    @app.exception_handler(QeacError)
    async def _domain_error(_request: Request, exc: QeacError) -> JSONResponse:
        payload = ErrorResponse(error=type(exc).__name__, detail=str(exc))
        return JSONResponse(status_code=400, content=payload.model_dump())

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError) -> JSONResponse:
        payload = ErrorResponse(error=type(exc).__name__, detail=str(exc))
        return JSONResponse(status_code=400, content=payload.model_dump())

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return handlers.handle_health()

    @app.get("/table", response_model=TableResponse)
    def table(l_max: int = Query(default=10, ge=1, le=200)) -> TableResponse:
        return handlers.handle_table(l_max)

    @app.get("/codes/{L}", response_model=CodesResponse, response_model_by_alias=True)
    def codes(L: int, source: str = Query(default="computed")) -> CodesResponse:
        return handlers.handle_codes(L, source)

    @app.post("/verify", response_model=VerifyResponse, response_model_by_alias=True)
    def verify(request: VerifyRequest) -> VerifyResponse:
        return handlers.handle_verify(request)

    @app.post("/evolve", response_model=EvolveResponse)
    def evolve(request: EvolveRequest) -> EvolveResponse:
        return handlers.handle_evolve(request)

    @app.post(
        "/trajectories", response_model=TrajectoriesResponse, response_model_by_alias=True
    )
    def trajectories(request: TrajectoriesRequest) -> TrajectoriesResponse:
        return handlers.handle_trajectories(request)

    @app.post(
        "/sweep-separation", response_model=SweepResponse, response_model_by_alias=True
    )
    def sweep_separation(request: SweepRequest) -> SweepResponse:
        return handlers.handle_sweep(request)

    @app.post("/encode", response_model=EncodeResponse)
    def encode(request: EncodeRequest) -> EncodeResponse:
        return handlers.handle_encode(request)

    @app.post("/decode", response_model=DecodeResponse)
    def decode(request: DecodeRequest) -> DecodeResponse:
        return handlers.handle_decode(request)

    return app


app = create_app()
