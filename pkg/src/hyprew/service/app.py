"""FastAPI app exposing the rewriting toolkit.

Run with: uvicorn hyprew.service.app:app
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .handlers import ServiceError, circuit, interp, iso, rewrite
from .models import (
    CircuitRequest,
    CircuitResponse,
    InterpRequest,
    InterpResponse,
    IsoRequest,
    IsoResponse,
    RewriteRequest,
    RewriteResponse,
)

app = FastAPI(title="hyprew", description="Traced hypergraph rewriting service")


def _run(handler, request):
    try:
        return handler(request)
    except ServiceError as exc:
        raise HTTPException(status_code=exc.status_code,
                            detail=exc.detail) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/interp", response_model=InterpResponse)
def post_interp(request: InterpRequest) -> InterpResponse:
    return _run(interp, request)


@app.post("/iso", response_model=IsoResponse)
def post_iso(request: IsoRequest) -> IsoResponse:
    return _run(iso, request)


@app.post("/rewrite", response_model=RewriteResponse)
def post_rewrite(request: RewriteRequest) -> RewriteResponse:
    return _run(rewrite, request)


@app.post("/circuit", response_model=CircuitResponse)
def post_circuit(request: CircuitRequest) -> CircuitResponse:
    return _run(circuit, request)
