"""Runtime state tracking: soft/hard transitions, acknowledgments, downtime
and parent-based host reachability."""

from sentinel.statemachine.state import (
    AckError,
    DowntimeError,
    EventKind,
    HostStatus,
    MonitorState,
    StateEvent,
    StateType,
    acknowledge,
    add_downtime,
    apply_result,
    in_downtime,
    is_ok_status,
)
from sentinel.statemachine.reachability import host_reachability

__all__ = [
    "AckError",
    "DowntimeError",
    "EventKind",
    "HostStatus",
    "MonitorState",
    "StateEvent",
    "StateType",
    "acknowledge",
    "add_downtime",
    "apply_result",
    "host_reachability",
    "in_downtime",
    "is_ok_status",
]
