"""FastAPI service wrapping the curvature toolkit.

Endpoints mirror the CLI commands one-to-one; the CLI is a thin client of
this app.  Domain errors map to structured HTTP errors: malformed input is
400 with detail.kind == "input" (CLI exit 2), violated preconditions are 422
with detail.kind == "precondition" (CLI exit 3).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..chart import load_metric_spec
from ..cotton_algebra import load_tensor_spec
from ..errors import CottonkitError, InputError, ParseError, PreconditionError
from ..reports import (DEFAULT_FLOAT_TOLERANCE, classify_report,
                       curvature_report, decompose_report, resolve_points,
                       verify_model_report)
from ..selftest import run_selftest
from . import models

DEFAULT_CLASSIFY_TOLERANCE = 1e-9


def _error_payload(kind: str, exc: Exception) -> dict:
    payload = {"kind": kind, "message": str(exc)}
    if isinstance(exc, ParseError):
        payload["position"] = exc.position
        payload["annotated"] = exc.annotate()
    return payload


def _load_chart(metric_text: str, mode_override):
    chart = load_metric_spec(metric_text)
    if mode_override and mode_override != chart.mode:
        chart = chart.with_mode(mode_override)
    return chart


def create_app() -> FastAPI:
    app = FastAPI(
        title="cottonkit",
        version=__version__,
        description="Pointwise curvature computations, conformal-flatness "
                    "classification, and Cotton-like tensor decomposition "
                    "for pseudo-Riemannian metrics in a single chart.",
    )

    @app.exception_handler(InputError)
    async def input_error_handler(request: Request, exc: InputError):
        return JSONResponse(status_code=400,
                            content={"detail": _error_payload("input", exc)})

    @app.exception_handler(PreconditionError)
    async def precondition_handler(request: Request, exc: PreconditionError):
        return JSONResponse(status_code=422,
                            content={"detail": _error_payload("precondition", exc)})

    @app.exception_handler(CottonkitError)
    async def internal_handler(request: Request, exc: CottonkitError):
        return JSONResponse(status_code=500,
                            content={"detail": _error_payload("internal", exc)})

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/curvature", response_model=models.CurvatureResponse)
    def curvature(request: models.CurvatureRequest):
        chart = _load_chart(request.metric, request.mode)
        points = resolve_points(chart, request.at, request.samples, request.seed)
        tolerance = request.tolerance or DEFAULT_FLOAT_TOLERANCE
        return curvature_report(chart, points, tolerance)

    @app.post("/classify", response_model=models.ClassifyResponse)
    def classify(request: models.ClassifyRequest):
        chart = _load_chart(request.metric, request.mode)
        samples = request.samples
        if samples is None and not request.at:
            samples = 20
        points = resolve_points(chart, request.at, samples, request.seed)
        tolerance = request.tolerance or DEFAULT_CLASSIFY_TOLERANCE
        return classify_report(chart, points, tolerance,
                               allow_skip=request.allow_skip, seed=request.seed)

    @app.post("/verify-model", response_model=models.VerifyModelResponse)
    def verify_model(request: models.VerifyModelRequest):
        tolerance = request.tolerance or DEFAULT_FLOAT_TOLERANCE
        return verify_model_report(request.a, request.samples, request.seed,
                                   request.mode, tolerance)

    @app.post("/decompose", response_model=models.DecomposeResponse)
    def decompose_endpoint(request: models.DecomposeRequest):
        components, ip = load_tensor_spec(request.tensor)
        return decompose_report(components, ip, request.tolerance)

    @app.post("/selftest", response_model=models.SelftestResponse)
    def selftest(request: models.SelftestRequest):
        return run_selftest(request.mode, request.seed, request.criteria,
                            request.corrupt_fixture)

    return app


app = create_app()
