"""HTTP interface: one POST endpoint per operation, thin over the service layer.

Responses wrap the service payload as ``{"report": ..., "violation": ...}``;
budget refusals map to HTTP 422, malformed requests to HTTP 400.
"""

from __future__ import annotations

from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .errors import BudgetError, ToolkitError
from .service import UsageError, run_operation


class SpaceRequest(BaseModel):
    space: Optional[dict] = None
    named: Optional[str] = None
    field: Optional[int] = Field(default=None, description="field size q")
    k: Optional[int] = None
    n: Optional[int] = None
    p: Optional[int] = None
    budget: Optional[int] = None


class RcRequest(SpaceRequest):
    flavor: str = "linear"
    action: str = "space"
    map: Optional[dict] = None


class PreserveRequest(SpaceRequest):
    q: Optional[int] = None
    flavor: str = "linear"


class EnumRequest(BaseModel):
    field: int = 2
    k: Optional[int] = None
    n: int = 3
    p: int = 3
    dim: Optional[int] = None
    codim: Optional[int] = None
    max_codim: Optional[int] = None
    list: bool = False
    budget: Optional[int] = None


class VerifyRequest(BaseModel):
    theorem: str
    field: Optional[int] = None
    k: Optional[int] = None
    rows: Optional[int] = None
    cols: Optional[int] = None
    codim_max: Optional[int] = None
    mode: Optional[str] = None
    seed: Optional[int] = None
    count: Optional[int] = None
    budget: Optional[int] = None
    jobs: Optional[int] = None
    timing: bool = False


class OperationResponse(BaseModel):
    report: dict
    violation: bool


def _run(op: str, req: BaseModel) -> OperationResponse:
    data: dict[str, Any] = {k: v for k, v in req.model_dump().items()
                            if v is not None}
    try:
        payload, violation = run_operation(op, data)
    except UsageError as e:
        raise HTTPException(status_code=400, detail=str(e)) from e
    except BudgetError as e:
        raise HTTPException(status_code=422, detail=str(e)) from e
    except ToolkitError as e:
        raise HTTPException(status_code=500, detail=str(e)) from e
    return OperationResponse(report=payload, violation=violation)


def create_app() -> FastAPI:
    app = FastAPI(title="rangecompat", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/space", response_model=OperationResponse)
    def space(req: SpaceRequest) -> OperationResponse:
        return _run("space", req)

    @app.post("/rc", response_model=OperationResponse)
    def rc(req: RcRequest) -> OperationResponse:
        return _run("rc", req)

    @app.post("/classify", response_model=OperationResponse)
    def classify(req: SpaceRequest) -> OperationResponse:
        return _run("classify", req)

    @app.post("/reflex", response_model=OperationResponse)
    def reflex(req: SpaceRequest) -> OperationResponse:
        return _run("reflex", req)

    @app.post("/preserve", response_model=OperationResponse)
    def preserve(req: PreserveRequest) -> OperationResponse:
        return _run("preserve", req)

    @app.post("/enum", response_model=OperationResponse)
    def enum_(req: EnumRequest) -> OperationResponse:
        return _run("enum", req)

    @app.post("/verify", response_model=OperationResponse)
    def verify(req: VerifyRequest) -> OperationResponse:
        return _run("verify", req)

    return app
