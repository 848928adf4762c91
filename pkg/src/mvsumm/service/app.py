"""FastAPI application exposing the summarization pipeline.

Run with:  uvicorn mvsumm.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DataError, NumericalError
from . import api, schemas

app = FastAPI(title="mvsumm", version=__version__)


@app.exception_handler(DataError)
async def data_error_handler(request: Request, exc: DataError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(NumericalError)
async def numerical_error_handler(request: Request, exc: NumericalError) -> JSONResponse:
    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/synth", response_model=schemas.SynthResponse)
def synth(request: schemas.SynthRequest) -> schemas.SynthResponse:
    return api.run_synth(request)


@app.post("/segment", response_model=schemas.SegmentResponse)
def segment(request: schemas.SegmentRequest) -> schemas.SegmentResponse:
    return api.run_segment(request)


@app.post("/summarize", response_model=schemas.SummarizeResponse)
def summarize(request: schemas.SummarizeRequest) -> schemas.SummarizeResponse:
    return api.run_summarize(request)


@app.post("/evaluate", response_model=schemas.MetricsPayload)
def evaluate(request: schemas.EvaluateRequest) -> schemas.MetricsPayload:
    return api.run_evaluate(request)
