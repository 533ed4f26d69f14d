"""FastAPI application exposing engine state and operator commands.

Reads serve the engine's latest immutable snapshot; writes validate against
it, enqueue a command for the single state thread and answer 202: they
become visible in a subsequent status read within one state-loop tick.
Every 4xx body carries a machine-readable ``error`` field.
"""

from __future__ import annotations

import os

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from sentinel.api.schemas import (
    Accepted,
    AckRequest,
    CheckRequest,
    DowntimeRequest,
    HostCounts,
    ObjectState,
    ResultRequest,
    ServiceCounts,
    StatusCounts,
    StatusDocument,
)
from sentinel.checkcore.plugin import CheckStatus
from sentinel.engine import Engine, TargetStateError, UnknownTargetError
from sentinel.passive.wire import PassiveResultLine, ResultKind, WireError
from sentinel.statemachine.state import (
    DowntimeError,
    HostStatus,
    MonitorState,
    StateType,
    in_downtime,
    is_ok_status,
)

API_PREFIX = "/api/v1"


def create_app(engine: Engine, token: str | None = None, console_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="sentinel", version=engine.settings.engine_version, docs_url=None, redoc_url=None)

    async def require_token(authorization: str | None = Header(default=None)) -> None:
        if token is None:
            return
        if authorization != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    auth = Depends(require_token)

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        return JSONResponse(status_code=exc.status_code, content={"error": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    @app.get(API_PREFIX + "/status", response_model=StatusDocument, dependencies=[auth])
    async def get_status(
        problem_only: bool = Query(default=False),
        hostgroup: str | None = Query(default=None),
        status: str | None = Query(default=None),
        limit: int | None = Query(default=None, ge=1),
        offset: int = Query(default=0, ge=0),
    ) -> StatusDocument:
        return build_status_document(
            engine,
            problem_only=problem_only,
            hostgroup=hostgroup,
            status_filter=status,
            limit=limit,
            offset=offset,
        )

    @app.get(API_PREFIX + "/objects/{host}", dependencies=[auth])
    async def get_host(host: str):
        snapshot, generated_at = engine.status_snapshot()
        target = ("host", host)
        if target not in snapshot:
            raise HTTPException(status_code=404, detail=f"unknown host {host!r}")
        services = [
            _object_state(t, s, engine, generated_at)
            for t, s in sorted(snapshot.items())
            if t[0] == "service" and t[1] == host
        ]
        return {
            "host": _object_state(target, snapshot[target], engine, generated_at),
            "services": services,
        }

    @app.get(API_PREFIX + "/objects/{host}/{service:path}", dependencies=[auth])
    async def get_service(host: str, service: str) -> ObjectState:
        snapshot, generated_at = engine.status_snapshot()
        target = ("service", host, service)
        state = snapshot.get(target)
        if state is None:
            raise HTTPException(status_code=404, detail=f"unknown service {service!r} on {host!r}")
        return _object_state(target, state, engine, generated_at)

    @app.post(API_PREFIX + "/ack", status_code=202, response_model=Accepted, dependencies=[auth])
    async def post_ack(body: AckRequest) -> Accepted:
        _call(lambda: engine.submit_ack(body.host, body.service, body.who, body.comment))
        return Accepted()

    @app.post(API_PREFIX + "/downtime", status_code=202, response_model=Accepted, dependencies=[auth])
    async def post_downtime(body: DowntimeRequest) -> Accepted:
        _call(lambda: engine.submit_downtime(body.host, body.service, body.start, body.end))
        return Accepted()

    @app.post(API_PREFIX + "/check", status_code=202, response_model=Accepted, dependencies=[auth])
    async def post_check(body: CheckRequest) -> Accepted:
        _call(lambda: engine.force_check(body.host, body.service))
        return Accepted()

    @app.post(API_PREFIX + "/result", status_code=202, response_model=Accepted, dependencies=[auth])
    async def post_result(body: ResultRequest) -> Accepted:
        kind = ResultKind[body.kind]
        if kind is ResultKind.SERVICE and not body.service:
            raise HTTPException(status_code=400, detail="service results need a service field")
        record = PassiveResultLine(
            kind=kind,
            host=body.host,
            service=body.service or "",
            code=body.code,
            output=body.output,
            received_at=body.received_at if body.received_at is not None else int(engine.clock()),
        )
        try:
            record.validate()
        except WireError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        _call(lambda: engine.submit_passive(record))
        return Accepted()

    @app.get("/healthz", include_in_schema=False)
    async def healthz():
        return {"ok": True}

    if console_dir and os.path.isdir(console_dir):
        app.mount("/console", StaticFiles(directory=console_dir, html=True), name="console")

        @app.get("/", include_in_schema=False)
        async def index():
            return FileResponse(os.path.join(console_dir, "index.html"))

    return app


def _call(action) -> None:
    try:
        action()
    except UnknownTargetError as exc:
        raise HTTPException(status_code=404, detail=f"unknown target: {exc}") from None
    except TargetStateError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from None
    except (DowntimeError, WireError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from None


def _object_state(target, state: MonitorState, engine: Engine, now: float) -> ObjectState:
    if target[0] == "host":
        definition = engine.config.hosts.get(target[1])
        host, service = target[1], None
    else:
        definition = engine.config.services.get((target[1], target[2]))
        host, service = target[1], target[2]
    return ObjectState(
        host=host,
        service=service,
        status=state.current_status.name,
        state_type=state.state_type.value,
        attempt=state.attempt,
        max_attempts=definition.max_check_attempts if definition else 1,
        last_check=state.last_check,
        last_state_change=state.last_state_change,
        last_hard_change=state.last_hard_change,
        last_output=state.last_output,
        acknowledged=state.acknowledged,
        in_downtime=in_downtime(state, now),
        duration=max(0.0, now - state.last_hard_change) if state.last_hard_change else 0.0,
    )


def _is_problem(state: MonitorState) -> bool:
    return state.state_type is StateType.HARD and not is_ok_status(state.current_status)


def build_status_document(
    engine: Engine,
    problem_only: bool = False,
    hostgroup: str | None = None,
    status_filter: str | None = None,
    limit: int | None = None,
    offset: int = 0,
) -> StatusDocument:
    snapshot, generated_at = engine.status_snapshot()

    member_hosts: set[str] | None = None
    if hostgroup is not None:
        group = engine.config.hostgroups.get(hostgroup)
        if group is None:
            raise HTTPException(status_code=404, detail=f"unknown hostgroup {hostgroup!r}")
        member_hosts = set(group.members)

    wanted_status = status_filter.upper() if status_filter else None

    selected: list[tuple[tuple, MonitorState]] = []
    for target in sorted(snapshot, key=lambda t: (t[0], t[1:])):
        state = snapshot[target]
        if member_hosts is not None and target[1] not in member_hosts:
            continue
        if problem_only and not _is_problem(state):
            continue
        if wanted_status is not None and state.current_status.name != wanted_status:
            continue
        selected.append((target, state))

    host_counts = HostCounts()
    service_counts = ServiceCounts()
    for target, state in selected:
        if target[0] == "host":
            host_counts.total += 1
            if state.current_status is HostStatus.UP:
                host_counts.up += 1
            elif state.current_status is HostStatus.DOWN:
                host_counts.down += 1
            elif state.current_status is HostStatus.UNREACHABLE:
                host_counts.unreachable += 1
        else:
            service_counts.total += 1
            name = state.current_status.name if isinstance(state.current_status, CheckStatus) else "UNKNOWN"
            if name == "OK":
                service_counts.ok += 1
            elif name == "WARNING":
                service_counts.warning += 1
            elif name == "CRITICAL":
                service_counts.critical += 1
            else:
                service_counts.unknown += 1

    window = selected[offset:]
    if limit is not None:
        window = window[:limit]

    return StatusDocument(
        generated_at=generated_at,
        counts=StatusCounts(hosts=host_counts, services=service_counts),
        objects=[_object_state(t, s, engine, generated_at) for t, s in window],
        stats=engine.stats(),
    )
