"""HTTP front end: FastAPI application over the request handlers.

Run with ``uvicorn hardylab.service:app``. Malformed payloads get the usual
422 from validation; requests that are well formed but violate an operator
hypothesis (symbol not a strict self-map, no disk expansion, bad parameter
range) get a 400 with the reason.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .api import handle_check, handle_classify, handle_matrix, handle_spectrum, handle_verify
from .schemas import (
    CheckRequest,
    ClassificationModel,
    ClassifyRequest,
    HealthResponse,
    MatrixRequest,
    MatrixResponse,
    RunReport,
    SpectrumAudit,
    SpectrumRequest,
    VerifyReport,
    VerifyRequest,
)
from .series import NotExpandableError, SelfMapError

app = FastAPI(
    title="hardylab",
    version=__version__,
    description=(
        "Weighted composition-differentiation operators on the Hardy space: "
        "truncated matrices, symmetry/normality/self-adjointness checks with "
        "matrix oracles, and the diagonal-family spectrum audit."
    ),
)


@app.exception_handler(SelfMapError)
async def _self_map_error(request: Request, exc: SelfMapError):
    return JSONResponse(
        status_code=400,
        content={"error": "hypothesis_violation", "message": str(exc)},
    )


@app.exception_handler(NotExpandableError)
async def _not_expandable(request: Request, exc: NotExpandableError):
    return JSONResponse(
        status_code=400,
        content={"error": "not_expandable", "message": str(exc)},
    )


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(
        status_code=400,
        content={"error": "invalid_input", "message": str(exc)},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/matrix", response_model=MatrixResponse)
def matrix(req: MatrixRequest) -> MatrixResponse:
    return handle_matrix(req)


@app.post("/check", response_model=RunReport)
def check(req: CheckRequest) -> RunReport:
    return handle_check(req)


@app.post("/classify", response_model=ClassificationModel)
def classify(req: ClassifyRequest) -> ClassificationModel:
    return handle_classify(req)


@app.post("/spectrum", response_model=SpectrumAudit)
def spectrum(req: SpectrumRequest) -> SpectrumAudit:
    return handle_spectrum(req)


@app.post("/verify", response_model=VerifyReport)
def verify(req: VerifyRequest) -> VerifyReport:
    return handle_verify(req)
