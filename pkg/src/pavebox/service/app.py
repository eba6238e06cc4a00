"""FastAPI application: paving as a service.

POST /pave runs the branch-and-prune paver synchronously and returns the
paving document (plus live duration).  The CLI is a thin client of the
same request/response models; it executes `run_pave_request` in-process
by default and over HTTP when pointed at a server.
"""

from __future__ import annotations

import argparse
from typing import Dict

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response

from .. import __version__
from ..box import Box
from ..output import format_float, paving_document, svg_string
from ..paver import Paving, PaverConfig, pave
from ..problems import BUILTINS, ProblemError, ProblemSpec, get_builtin, parse_problem
from .models import (
    HealthResponse,
    ParseRequest,
    PaveRequest,
    PaveResponse,
    ProblemModel,
    SvgRequest,
    VarSpec,
    parse_eps,
)


def problem_from_model(model: ProblemModel) -> ProblemSpec:
    return ProblemSpec(
        names=[v.name for v in model.vars],
        domains=[(v.lo, v.hi) for v in model.vars],
        constraint_texts=list(model.constraints),
        projection=model.project,
    )


def problem_to_model(spec: ProblemSpec) -> ProblemModel:
    return ProblemModel(
        vars=[
            VarSpec(name=n, lo=lo, hi=hi)
            for n, (lo, hi) in zip(spec.names, spec.domains)
        ],
        constraints=list(spec.constraint_texts),
        project=spec.projection,
    )


def resolve_problem(request: PaveRequest) -> ProblemSpec:
    if request.builtin is not None:
        spec = get_builtin(request.builtin)
    else:
        spec = problem_from_model(request.problem)  # type: ignore[arg-type]
    if request.project is not None:
        a, b = request.project
        if a not in spec.names or b not in spec.names:
            raise ValueError(f"projection variables {a!r}, {b!r} must be declared")
        spec = ProblemSpec(
            names=spec.names,
            domains=spec.domains,
            constraint_texts=spec.constraint_texts,
            projection=(a, b),
        )
    return spec


def run_pave_request(request: PaveRequest) -> tuple[ProblemSpec, Paving, Dict]:
    """Executes a pave request; returns (problem, paving, JSON document)."""
    spec = resolve_problem(request)
    eps = parse_eps(request.eps)
    cfg = PaverConfig(
        eps=eps,
        contractor=request.contractor,
        max_boxes=request.max_boxes,
        threads=request.threads,
    )
    paving = pave(spec.function, spec.initial_box(), cfg)
    doc = paving_document(
        spec,
        paving,
        contractor=request.contractor,
        max_boxes=request.max_boxes,
        threads=request.threads,
    )
    return spec, paving, doc


def create_app() -> FastAPI:
    app = FastAPI(
        title="pavebox",
        version=__version__,
        description="Guaranteed pavings of nonlinear solution sets.",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/problems/builtin")
    def builtins() -> Dict:
        out = {}
        for name in sorted(BUILTINS):
            spec = get_builtin(name)
            out[name] = problem_to_model(spec).model_dump()
        return {"names": sorted(BUILTINS), "problems": out}

    @app.post("/problems/parse", response_model=ProblemModel)
    def parse(req: ParseRequest) -> ProblemModel:
        try:
            spec = parse_problem(req.text)
        except ProblemError as exc:
            raise HTTPException(
                status_code=422,
                detail={"message": exc.message, "line": exc.line, "col": exc.col},
            ) from None
        return problem_to_model(spec)

    @app.post("/pave", response_model=PaveResponse)
    def pave_endpoint(req: PaveRequest) -> PaveResponse:
        try:
            _, paving, doc = run_pave_request(req)
        except (ValueError, ProblemError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        doc["result"]["duration_ms"] = int(paving.duration_s * 1000)
        return PaveResponse.model_validate(doc)

    @app.post("/svg")
    def svg(req: SvgRequest) -> Response:
        boxes = [Box.from_bounds(list(b)) for b in req.boxes]
        try:
            text = svg_string(boxes, req.frame)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return Response(content=text, media_type="image/svg+xml")

    return app


app = create_app()


def main() -> None:
    parser = argparse.ArgumentParser(description="Run the pavebox HTTP service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args()
    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
