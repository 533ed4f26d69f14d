"""Notification gates: options, periods, acknowledgment, downtime and the
renotification interval.

Every suppression names its gate, so "why did nobody get paged" is always
answerable from the audit log.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, tzinfo
from zoneinfo import ZoneInfo

from sentinel.checkcore.plugin import CheckStatus
from sentinel.objconf.model import TimePeriodDef
from sentinel.statemachine.state import EventKind, HostStatus, MonitorState, StateEvent, in_downtime

# status -> notification option letter
_SERVICE_LETTER = {
    CheckStatus.WARNING: "w",
    CheckStatus.UNKNOWN: "u",
    CheckStatus.CRITICAL: "c",
}
_HOST_LETTER = {
    HostStatus.DOWN: "d",
    HostStatus.UNREACHABLE: "u",
}


@dataclass
class NotificationPolicy:
    options: frozenset[str]
    notification_interval: int
    notification_period: str
    contact_groups: tuple[str, ...] = ()


def in_period(period: TimePeriodDef, at: float, tz: tzinfo | str | None = None) -> bool:
    """True iff the timestamp's local weekday has a range containing its
    minute of day (ranges are half-open)."""
    if isinstance(tz, str):
        tz = ZoneInfo(tz)
    moment = datetime.fromtimestamp(at, tz)
    minute = moment.hour * 60 + moment.minute
    for start, end in period.ranges.get(moment.weekday(), ()):
        if start <= minute < end:
            return True
    return False


def should_notify(
    event: StateEvent,
    policy: NotificationPolicy,
    state: MonitorState,
    periods: dict[str, TimePeriodDef],
    now: float,
    interval_length: float = 60.0,
    tz: tzinfo | str | None = None,
    period_override: str | None = None,
) -> tuple[bool, str]:
    """Evaluate all gates; returns (decision, reason for the first failure).

    ``period_override`` substitutes a channel-specific period (the calendar
    mechanism for per-staff alarm hours); all other gates are unaffected.
    """
    if event.kind not in (EventKind.PROBLEM, EventKind.RECOVERY, EventKind.RENOTIFY_ELIGIBLE):
        return False, f"event kind {event.kind.value} is not notifiable"

    letter = _option_letter(event)
    if letter is None:
        return False, f"no option letter for status {event.status}"
    if letter not in policy.options:
        return False, f"option {letter} disabled"

    period_name = period_override if period_override is not None else policy.notification_period
    period = periods.get(period_name)
    if period is None:
        return False, f"unknown period {period_name!r}"
    if not in_period(period, now, tz):
        return False, "outside period"

    if state.acknowledged and event.kind is not EventKind.RECOVERY:
        return False, "acknowledged"

    if in_downtime(state, now):
        return False, "in downtime"

    if event.kind is EventKind.RENOTIFY_ELIGIBLE:
        if policy.notification_interval <= 0:
            return False, "renotification disabled"
        if state.last_notification is not None:
            elapsed = now - state.last_notification
            if elapsed < policy.notification_interval * interval_length:
                return False, "renotify interval not elapsed"

    return True, "ok"


def _option_letter(event: StateEvent) -> str | None:
    if event.kind is EventKind.RECOVERY:
        return "r"
    if isinstance(event.status, HostStatus):
        return _HOST_LETTER.get(event.status)
    return _SERVICE_LETTER.get(event.status)
