"""HTTP service exposing the simulator: plans in, estimates out.

The CLI is a thin client of this app (in-process by default); the endpoints
do nothing beyond schema translation around the core library.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..bitflip import oracle_failure_probability
from ..gkp import find_threshold, hashing_rate_analog, hashing_rate_digital, sigma_to_db
from ..montecarlo import TrialPlan, run_plan
from .schemas import (
    EstimateModel,
    HashingRequest,
    HashingResponse,
    OracleRequest,
    OracleResponse,
    RunRequest,
    RunResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="gkpaqec", description="GKP-qubit QEC Monte Carlo service")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        try:
            plan = TrialPlan(
                experiment=req.experiment,
                decoder=req.decoder,
                sigmas=tuple(req.sigmas),
                levels=tuple(req.levels),
                trials=req.trials,
                master_seed=req.seed,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        estimates = run_plan(plan)
        return RunResponse(estimates=[EstimateModel.from_estimate(e) for e in estimates])

    @app.post("/oracle", response_model=OracleResponse)
    def oracle(req: OracleRequest) -> OracleResponse:
        try:
            p = oracle_failure_probability(req.sigma, req.decoder, req.grid)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return OracleResponse(
            code=req.code, sigma=req.sigma, decoder=req.decoder, grid=req.grid, p_fail=p
        )

    @app.post("/hashing", response_model=HashingResponse)
    def hashing(req: HashingRequest) -> HashingResponse:
        rate_fn = hashing_rate_digital if req.mode == "digital" else hashing_rate_analog
        try:
            root = find_threshold(rate_fn, req.lo, req.hi, req.tol)
        except ValueError as exc:
            # no sign change over the bracket, or a malformed bracket
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return HashingResponse(
            mode=req.mode, sigma_root=root, db_root=sigma_to_db(root), tolerance=req.tol
        )

    return app
