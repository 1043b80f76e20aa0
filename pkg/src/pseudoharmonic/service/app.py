"""Service endpoints; every computation the CLI exposes goes through here.

Endpoints are synchronous (the work is CPU-bound numerics) and stateless.
Domain violations surface as 400 with the library's message; numerical
failures (non-convergence, accuracy loss) as 500, since the request was
legitimate but the computation could not be completed to specification.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    TruncationError,
    UnsupportedCaseError,
)
from ..algebra import TruncationSpec, commutator_check, grid_ladder_residuals, grid_shift_residuals
from ..identity import verify_identity
from ..nonclassical import scan
from ..spectrum import GridSpec, eigenfunction, energy
from ..states import bg_state, gp_state
from ..verify import run_all
from . import schemas as sc


def create_app() -> FastAPI:
    app = FastAPI(title="pseudoharmonic", version=__version__)

    @app.exception_handler(DomainError)
    @app.exception_handler(UnsupportedCaseError)
    async def _bad_request(request: Request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(TruncationError)
    async def _truncation(request: Request, exc):
        return JSONResponse(
            status_code=400,
            content={"detail": str(exc), "needed_dim": exc.needed_dim},
        )

    @app.exception_handler(ConvergenceError)
    @app.exception_handler(AccuracyError)
    async def _numerical_failure(request: Request, exc):
        return JSONResponse(
            status_code=500,
            content={"detail": str(exc), "residual": sc.clean_float(exc.residual)},
        )

    @app.get("/health", response_model=sc.HealthResponse)
    def health() -> sc.HealthResponse:
        return sc.HealthResponse(status="ok", version=__version__)

    @app.post("/spectrum", response_model=sc.SpectrumResponse)
    def spectrum_endpoint(req: sc.SpectrumRequest) -> sc.SpectrumResponse:
        params = req.to_params()
        levels = [sc.LevelOut(n=n, energy=energy(params, n)) for n in range(req.n_max + 1)]
        return sc.SpectrumResponse(s=params.s, g=params.g, levels=levels)

    @app.post("/wavefunction", response_model=sc.WavefnResponse)
    def wavefunction(req: sc.WavefnRequest) -> sc.WavefnResponse:
        params = req.to_params()
        grid = None
        if req.grid is not None:
            grid = GridSpec(x_min=req.grid.min, x_max=req.grid.max, count=req.grid.count)
        psi = eigenfunction(params, req.n, grid)
        return sc.WavefnResponse(n=req.n, x=psi.x.tolist(), psi=psi.values.tolist())

    @app.post("/state", response_model=sc.StateResponse)
    def state(req: sc.StateRequest) -> sc.StateResponse:
        params = req.to_params()
        z = complex(req.z_re, req.z_im)
        build = bg_state if req.family == "bg" else gp_state
        vec = build(params, z, dim=req.dim, tail_threshold=req.tail_threshold)
        coeff = [
            sc.CoeffOut(n=i, re=c.real, im=c.imag, abs2=abs(c) ** 2)
            for i, c in enumerate(vec.coeff)
        ]
        return sc.StateResponse(
            family=req.family,
            label=vec.label,
            z_re=req.z_re,
            z_im=req.z_im,
            dim=vec.dim,
            tail_bound=sc.clean_float(vec.tail_bound),
            coeff=coeff,
        )

    @app.post("/metrics/scan", response_model=sc.MetricsScanResponse)
    def metrics_scan(req: sc.MetricsScanRequest) -> sc.MetricsScanResponse:
        params = req.to_params()
        records, warnings = scan(
            params,
            req.family,
            req.z_min,
            req.z_max,
            req.steps,
            dim=req.dim,
            tail_threshold=req.tail_threshold,
        )
        rows = [
            sc.MetricsRecordOut(
                z=r.z,
                s_x1=sc.clean_float(r.s_x1),
                s_p1=sc.clean_float(r.s_p1),
                s_x2=sc.clean_float(r.s_x2),
                s_p2=sc.clean_float(r.s_p2),
                q=sc.clean_float(r.q),
                trunc_dim=r.trunc_dim,
                tail_bound=sc.clean_float(r.tail_bound),
                error=r.error,
            )
            for r in records
        ]
        return sc.MetricsScanResponse(family=req.family, records=rows, warnings=warnings)

    @app.post("/checks/identity", response_model=sc.IdentityCheckResponse)
    def identity_check(req: sc.IdentityCheckRequest) -> sc.IdentityCheckResponse:
        params = req.to_params()
        n_max = req.n_max if req.n_max is not None else (8 if req.family == "bg" else 10)
        report = verify_identity(req.family, params, n_max, req.tolerance)
        return sc.IdentityCheckResponse(
            family=report.family,
            tolerance=report.tolerance,
            max_rel_err=report.max_rel_err,
            passed=report.passed,
            scheme=sc.QuadratureSchemeOut(
                kind=report.scheme.kind,
                node_count=report.scheme.node_count,
                transform=report.scheme.transform,
                error_estimate=sc.clean_float(report.scheme.error_estimate),
            ),
            rows=[
                sc.MomentRowOut(
                    n=r.n, quadrature=r.quadrature, closed_form=r.closed_form, rel_err=r.rel_err
                )
                for r in report.rows
            ],
        )

    @app.post("/checks/algebra", response_model=sc.AlgebraCheckResponse)
    def algebra_check(req: sc.AlgebraCheckRequest) -> sc.AlgebraCheckResponse:
        params = req.to_params()
        report = commutator_check(params, TruncationSpec(dim=req.dim, interior_margin=2))
        grid_rows = []
        grid_worst = 0.0
        for n in range(req.n_grid + 1):
            r_plus, r_minus = grid_ladder_residuals(params, n)
            r_a, r_ad = grid_shift_residuals(params, n)
            grid_worst = max(grid_worst, r_plus, r_minus, r_a, r_ad)
            grid_rows.append(
                sc.GridResidualOut(
                    n=n, ladder_plus=r_plus, ladder_minus=r_minus, shift_a=r_a, shift_adjoint=r_ad
                )
            )
        passed = report.max_interior() <= req.interior_tol and grid_worst <= req.grid_tol
        return sc.AlgebraCheckResponse(
            dim=req.dim,
            interior_tol=req.interior_tol,
            grid_tol=req.grid_tol,
            commutators=sc.CommutatorOut(
                lowering_raising=report.lowering_raising,
                weight_raising=report.weight_raising,
                weight_lowering=report.weight_lowering,
                hamiltonian_match=report.hamiltonian_match,
                edge_residual=sc.clean_float(report.edge_residual),
                max_interior=report.max_interior(),
            ),
            grid=grid_rows,
            passed=passed,
        )

    @app.post("/verify", response_model=sc.VerifyResponse)
    def verify() -> sc.VerifyResponse:
        report = run_all()
        return sc.VerifyResponse(
            all_passed=report.all_passed,
            elapsed=report.elapsed,
            results=[
                sc.VerifyCheckOut(
                    name=r.name,
                    passed=r.passed,
                    measured=sc.clean_float(r.measured),
                    bound=sc.clean_float(r.bound),
                    comparator=r.comparator,
                    detail=r.detail,
                    line=r.line(),
                )
                for r in report.results
            ],
        )

    return app


app = create_app()
