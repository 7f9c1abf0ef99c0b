"""HTTP JSON API binding the game engine for clients.

All state lives in the profile store; request handling is stateless above
it, and the submit endpoint is the only profile mutator. Level data is
generated server-side from one master seed so targets stay authoritative.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import levelgen, scoring, solver
from .catalog import Catalog, catalog_to_dicts, load_catalog
from .errors import (
    IllegalPickError,
    StorageUnavailableError,
    UnknownTokenError,
    VersionConflictError,
)
from .requirements import Gender, load_requirement_table
from .scoring import profile_summary, result_to_dict
from .solver import DayPlan, SelectionConstraints
from .store import FileStore, MemoryStore

PORT_ENV_VAR = "FOODCAL_PORT"
CORS_ENV_VAR = "FOODCAL_CORS_ORIGIN"
MASTER_SEED_ENV_VAR = "FOODCAL_MASTER_SEED"
DATA_DIR_ENV_VAR = "FOODCAL_DATA_DIR"

DEFAULT_PORT = 8080
DEFAULT_MASTER_SEED = 20240315
CAS_RETRIES = 3


@dataclass
class ServiceConfig:
    catalog_path: Union[str, Path, None] = None
    requirements_path: Union[str, Path, None] = None
    data_dir: Union[str, Path, None] = None  # None selects the in-memory store
    master_seed: int = DEFAULT_MASTER_SEED
    pass_threshold: int = scoring.DEFAULT_PASS_THRESHOLD
    constraints: SelectionConstraints = field(default_factory=SelectionConstraints)
    staple_mode: str = levelgen.STAPLE_MODE_ONE_EACH
    faithful_mode: bool = False  # disables the hint endpoint
    cors_origin: str | None = None
    host: str = "127.0.0.1"
    port: int = DEFAULT_PORT

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        seed = os.environ.get(MASTER_SEED_ENV_VAR)
        return cls(
            data_dir=os.environ.get(DATA_DIR_ENV_VAR),
            master_seed=int(seed) if seed else DEFAULT_MASTER_SEED,
            cors_origin=os.environ.get(CORS_ENV_VAR),
            port=int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT)),
        )


class ApiError(Exception):
    """Error surfaced to clients as {code, message} with an HTTP status."""

    def __init__(self, http_status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message


class PickBody(BaseModel):
    item_id: str
    quantity: int


class PlanBody(BaseModel):
    breakfast: list[PickBody] = Field(default_factory=list)
    lunch: list[PickBody] = Field(default_factory=list)
    dinner: list[PickBody] = Field(default_factory=list)


class SubmissionBody(BaseModel):
    male_plan: PlanBody
    female_plan: PlanBody


def _plan_from_body(body: PlanBody, level: levelgen.Level, gender: Gender,
                    catalog: Catalog) -> DayPlan:
    pools = [
        [catalog.get(i) for i in w.item_ids]
        for w in level.windows_for(gender)
    ]
    choices = []
    for pool, picks in zip(pools, (body.breakfast, body.lunch, body.dinner)):
        known = {item.id for item in pool}
        for pick in picks:
            if pick.item_id not in known:
                raise IllegalPickError(
                    f"{gender.value}: item {pick.item_id!r} is not in this window's pool"
                )
        choices.append(solver.make_window_choice(pool, ((p.item_id, p.quantity) for p in picks)))
    return DayPlan(
        breakfast=choices[0], lunch=choices[1], dinner=choices[2],
        day_total_kcal=sum(c.total_kcal for c in choices),
    )


def _plan_to_dict(plan: DayPlan) -> dict:
    return {
        slot: [{"item_id": p.item_id, "quantity": p.quantity} for p in choice.picks]
        for slot, choice in (
            ("breakfast", plan.breakfast), ("lunch", plan.lunch), ("dinner", plan.dinner),
        )
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    catalog = load_catalog(config.catalog_path)
    table = load_requirement_table(config.requirements_path)
    store = FileStore(config.data_dir) if config.data_dir is not None else MemoryStore()
    levels = levelgen.generate_all_levels(
        catalog, table, config.master_seed, config.constraints,
        staple_mode=config.staple_mode, allow_partial_span=True,
    )
    by_number = {level.level_number: level for level in levels}

    app = FastAPI(title="foodcal", docs_url=None, redoc_url=None)
    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": exc.message},
        )

    @app.exception_handler(StarletteHTTPException)
    async def handle_http_error(_request: Request, exc: StarletteHTTPException) -> JSONResponse:
        # unknown routes / wrong methods still produce {code, message} bodies
        code = "not_found" if exc.status_code in (404, 405) else "bad_request"
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": code, "message": str(exc.detail)},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": str(exc.errors()[:1])},
        )

    @app.exception_handler(Exception)
    async def handle_unexpected(_request: Request, exc: Exception) -> JSONResponse:
        # Never leak stack traces; storage problems map to 503.
        if isinstance(exc, StorageUnavailableError):
            return JSONResponse(
                status_code=503,
                content={"code": "storage_unavailable", "message": "storage unavailable"},
            )
        return JSONResponse(
            status_code=500,
            content={"code": "bad_request", "message": "internal error"},
        )

    def require_token(request: Request) -> str:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise ApiError(401, "unknown_token", "missing bearer token")
        try:
            store.get_profile(token)
        except UnknownTokenError:
            raise ApiError(401, "unknown_token", "unknown player token") from None
        return token

    def require_level(n: int) -> levelgen.Level:
        level = by_number.get(n)
        if level is None:
            raise ApiError(404, "not_found", f"no level {n}")
        return level

    @app.post("/v1/auth/anonymous")
    def auth_anonymous() -> dict:
        token = store.create_anonymous_player()
        return {"token": token}

    @app.get("/v1/levels/{n}")
    def get_level(n: int, _token: str = Depends(require_token)) -> dict:
        return levelgen.level_to_dict(require_level(n))

    @app.post("/v1/levels/{n}/submit")
    def submit(n: int, body: SubmissionBody, token: str = Depends(require_token)) -> dict:
        level = require_level(n)
        try:
            submission = scoring.Submission(
                level_number=n,
                male_plan=_plan_from_body(body.male_plan, level, Gender.MALE, catalog),
                female_plan=_plan_from_body(body.female_plan, level, Gender.FEMALE, catalog),
            )
        except IllegalPickError as exc:
            raise ApiError(422, "illegal_pick", str(exc)) from None

        for _ in range(CAS_RETRIES):
            doc = store.get_profile(token)
            try:
                result, updated = scoring.evaluate_submission(
                    level, submission, doc.profile, catalog,
                    config.constraints, config.pass_threshold,
                )
            except IllegalPickError as exc:
                raise ApiError(422, "illegal_pick", str(exc)) from None
            try:
                store.put_profile(token, updated, doc.version)
            except VersionConflictError:
                continue
            payload = result_to_dict(result)
            payload["profile"] = _summary_dict(updated)
            return payload
        raise ApiError(409, "version_conflict", "profile update kept conflicting; retry")

    @app.get("/v1/profile")
    def get_profile(token: str = Depends(require_token)) -> dict:
        doc = store.get_profile(token)
        return _summary_dict(doc.profile)

    @app.get("/v1/levels/{n}/hint")
    def hint(n: int, gender: str = "", _token: str = Depends(require_token)) -> dict:
        if config.faithful_mode:
            raise ApiError(404, "not_found", "hints are disabled on this server")
        level = require_level(n)
        try:
            parsed = Gender(gender)
        except ValueError:
            raise ApiError(
                400, "bad_request", f"gender must be one of {[g.value for g in Gender]}"
            ) from None
        pools = [[catalog.get(i) for i in w.item_ids] for w in level.windows_for(parsed)]
        target = level.target_for(parsed)
        plan = solver.best_plan(pools, config.constraints, target)
        return {
            "gender": parsed.value,
            "plan": _plan_to_dict(plan),
            "day_total_kcal": plan.day_total_kcal,
            "target_kcal": target,
            "projected_stars": scoring.score_stars(plan.day_total_kcal, target),
        }

    @app.get("/v1/catalog")
    def get_catalog() -> list[dict]:
        return catalog_to_dicts(catalog)

    @app.get("/v1/meta")
    def meta() -> dict:
        return {
            "level_count": len(levels),
            "age_min": table.age_min,
            "age_max": table.age_max,
            "pass_threshold": config.pass_threshold,
            "hints_enabled": not config.faithful_mode,
            "constraints": {
                "min_items_per_window": config.constraints.min_items_per_window,
                "max_items_per_window": config.constraints.max_items_per_window,
                "max_quantity_per_item": config.constraints.max_quantity_per_item,
            },
        }

    def _summary_dict(profile: scoring.PlayerProfile) -> dict:
        summary = profile_summary(profile, len(levels))
        return {
            "total_levels": summary.total_levels,
            "levels_tried": summary.levels_tried,
            "levels_passed": summary.levels_passed,
            "total_attempts": summary.total_attempts,
        }

    return app


def run_server(config: ServiceConfig | None = None) -> None:
    """Blocking server start for the CLI."""
    import uvicorn

    config = config or ServiceConfig.from_env()
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
