"""Request and response models for the control API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ObjectState(BaseModel):
    host: str
    service: str | None = None
    status: str
    state_type: str
    attempt: int
    max_attempts: int
    last_check: float
    last_state_change: float
    last_hard_change: float
    last_output: str
    acknowledged: bool
    in_downtime: bool
    duration: float = Field(0.0, description="seconds since the last hard change")


class HostCounts(BaseModel):
    total: int = 0
    up: int = 0
    down: int = 0
    unreachable: int = 0


class ServiceCounts(BaseModel):
    total: int = 0
    ok: int = 0
    warning: int = 0
    critical: int = 0
    unknown: int = 0


class StatusCounts(BaseModel):
    hosts: HostCounts
    services: ServiceCounts


class StatusDocument(BaseModel):
    generated_at: float
    counts: StatusCounts
    objects: list[ObjectState]
    stats: dict[str, int] = Field(default_factory=dict)


class AckRequest(BaseModel):
    host: str
    service: str | None = None
    who: str = Field(min_length=1)
    comment: str = ""


class DowntimeRequest(BaseModel):
    host: str
    service: str | None = None
    start: float
    end: float


class CheckRequest(BaseModel):
    host: str
    service: str | None = None


class ResultRequest(BaseModel):
    kind: str = Field(pattern="^(SERVICE|HOST)$")
    host: str = Field(min_length=1)
    service: str | None = None
    code: int
    output: str = ""
    received_at: int | None = None


class Accepted(BaseModel):
    accepted: bool = True


class ApiError(BaseModel):
    error: str
