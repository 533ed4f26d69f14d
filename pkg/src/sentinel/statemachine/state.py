"""Per-object runtime state and the soft/hard transition rules.

A problem only becomes alarm-worthy (HARD) after max_check_attempts
consecutive non-OK results; recovery is immediate on the first OK.  Every
applied result yields a STATE_LOG event; PROBLEM and RECOVERY fire only on
hard-state boundaries, except that volatile services re-raise PROBLEM on
every non-OK hard result.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from sentinel.checkcore.plugin import CheckOrigin, CheckResult, CheckStatus


class StateType(enum.Enum):
    SOFT = "SOFT"
    HARD = "HARD"


class HostStatus(enum.Enum):
    UP = "UP"
    DOWN = "DOWN"
    UNREACHABLE = "UNREACHABLE"


class EventKind(enum.Enum):
    PROBLEM = "PROBLEM"
    RECOVERY = "RECOVERY"
    STATE_LOG = "STATE_LOG"
    RENOTIFY_ELIGIBLE = "RENOTIFY_ELIGIBLE"


Status = CheckStatus | HostStatus


def is_ok_status(status: Status) -> bool:
    return status is CheckStatus.OK or status is HostStatus.UP


@dataclass(frozen=True)
class StateEvent:
    kind: EventKind
    target: tuple
    at: float
    status: Status
    output: str
    attempt: int = 1


@dataclass
class MonitorState:
    current_status: Status
    state_type: StateType = StateType.HARD
    attempt: int = 1
    last_check: float = 0.0
    last_state_change: float = 0.0
    last_hard_change: float = 0.0
    last_notification: float | None = None
    acknowledged: bool = False
    ack_who: str = ""
    ack_comment: str = ""
    downtimes: tuple[tuple[float, float], ...] = ()
    last_output: str = ""

    @classmethod
    def fresh_service(cls) -> "MonitorState":
        return cls(current_status=CheckStatus.OK)

    @classmethod
    def fresh_host(cls) -> "MonitorState":
        return cls(current_status=HostStatus.UP)


class AckError(Exception):
    """Acknowledging an object that is not in a hard problem state."""


class DowntimeError(Exception):
    """Rejected downtime window (end must be after start)."""


def in_downtime(state: MonitorState, now: float) -> bool:
    """True iff now falls inside any scheduled [start, end) window."""
    return any(start <= now < end for start, end in state.downtimes)


def prune_downtimes(state: MonitorState, now: float) -> MonitorState:
    """Drop windows that already ended."""
    kept = tuple(w for w in state.downtimes if w[1] > now)
    if kept == state.downtimes:
        return state
    return replace(state, downtimes=kept)


def add_downtime(state: MonitorState, start: float, end: float) -> MonitorState:
    if end <= start:
        raise DowntimeError("downtime end must be after start")
    return replace(state, downtimes=state.downtimes + ((start, end),))


def acknowledge(state: MonitorState, who: str, comment: str, now: float) -> MonitorState:
    """Mark the current hard problem acknowledged; recovery clears it."""
    if state.state_type is not StateType.HARD or is_ok_status(state.current_status):
        raise AckError("not in problem state")
    return replace(state, acknowledged=True, ack_who=who, ack_comment=comment)


def apply_result(
    state: MonitorState,
    max_check_attempts: int,
    result: CheckResult,
    now: float,
    *,
    target: tuple = (),
    status: Status | None = None,
    is_volatile: bool = False,
    passive_checks_enabled: bool = True,
    host_unreachable: bool = False,
) -> tuple[MonitorState, list[StateEvent]]:
    """Apply one check result; return the next state plus emitted events.

    ``status`` overrides the result's own status, which is how host results
    arrive pre-classified as UP/DOWN/UNREACHABLE.  While the object is in
    downtime (or its host is unreachable, for services) only STATE_LOG is
    emitted; the state still advances so the picture stays truthful.
    """
    if max_check_attempts < 1:
        raise ValueError("max_check_attempts must be >= 1")
    new_status: Status = result.status if status is None else status

    if result.origin is CheckOrigin.PASSIVE and not passive_checks_enabled:
        audit = StateEvent(
            kind=EventKind.STATE_LOG,
            target=target,
            at=now,
            status=state.current_status,
            output=f"passive result rejected (passive checks disabled): {result.output}",
            attempt=state.attempt,
        )
        return state, [audit]

    state = prune_downtimes(state, now)
    prev_status = state.current_status
    prev_type = state.state_type
    next_state = replace(state, last_check=now, last_output=result.output)
    events: list[StateEvent] = []

    def emit(kind: EventKind, attempt: int) -> None:
        events.append(
            StateEvent(
                kind=kind,
                target=target,
                at=now,
                status=next_state.current_status,
                output=result.output,
                attempt=attempt,
            )
        )

    if is_ok_status(new_status):
        if prev_type is StateType.HARD and not is_ok_status(prev_status):
            # confirmed problem ends: recovery alarm, ack implicitly cleared
            next_state = replace(
                next_state,
                current_status=new_status,
                state_type=StateType.HARD,
                attempt=1,
                last_state_change=now,
                last_hard_change=now,
                acknowledged=False,
                ack_who="",
                ack_comment="",
            )
            emit(EventKind.RECOVERY, 1)
        elif prev_type is StateType.SOFT:
            # problem evaporated before confirmation: no alarm was raised,
            # so none is withdrawn
            next_state = replace(
                next_state,
                current_status=new_status,
                state_type=StateType.HARD,
                attempt=1,
                last_state_change=now,
            )
        else:
            next_state = replace(next_state, current_status=new_status, attempt=1)
    else:
        if prev_type is StateType.HARD and is_ok_status(prev_status):
            if max_check_attempts == 1:
                next_state = replace(
                    next_state,
                    current_status=new_status,
                    state_type=StateType.HARD,
                    attempt=1,
                    last_state_change=now,
                    last_hard_change=now,
                )
                emit(EventKind.PROBLEM, 1)
            else:
                next_state = replace(
                    next_state,
                    current_status=new_status,
                    state_type=StateType.SOFT,
                    attempt=1,
                    last_state_change=now,
                )
        elif prev_type is StateType.SOFT:
            attempt = state.attempt + 1
            changed = new_status != prev_status
            if attempt >= max_check_attempts:
                next_state = replace(
                    next_state,
                    current_status=new_status,
                    state_type=StateType.HARD,
                    attempt=1,
                    last_state_change=now if changed else state.last_state_change,
                    last_hard_change=now,
                )
                emit(EventKind.PROBLEM, max_check_attempts)
            else:
                next_state = replace(
                    next_state,
                    current_status=new_status,
                    attempt=attempt,
                    last_state_change=now if changed else state.last_state_change,
                )
        else:  # HARD problem continues
            if new_status != prev_status:
                # severity change inside a hard problem is a fresh alarm and
                # invalidates any standing acknowledgment
                next_state = replace(
                    next_state,
                    current_status=new_status,
                    attempt=1,
                    last_state_change=now,
                    last_hard_change=now,
                    acknowledged=False,
                    ack_who="",
                    ack_comment="",
                )
                emit(EventKind.PROBLEM, 1)
            elif is_volatile:
                emit(EventKind.PROBLEM, 1)
            else:
                emit(EventKind.RENOTIFY_ELIGIBLE, 1)

    if in_downtime(next_state, now):
        events = []
    elif host_unreachable:
        # alarm-storm prevention: the parent outage is the real problem
        events = [e for e in events if e.kind is EventKind.RECOVERY]
    events.insert(
        0,
        StateEvent(
            kind=EventKind.STATE_LOG,
            target=target,
            at=now,
            status=next_state.current_status,
            output=result.output,
            attempt=next_state.attempt,
        ),
    )
    return next_state, events
