"""Rendering of PROBLEM / RECOVERY notification text.

One field per line, LF terminated:

    ***** <engine> <version> *****
    Notification Type: PROBLEM
    Service: IT Web Server
    Host: WWW Server WEB
    Address: 131.169.40.38
    State: CRITICAL
    Date/Time: Wed Mar 19 08:35:59 MET 2003
    Additional Info: Connection refused by host

Host notifications carry no Service line.  The Date/Time weekday is always
derived from the timestamp itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, tzinfo
from zoneinfo import ZoneInfo


@dataclass
class NotificationMessage:
    notification_type: str  # "PROBLEM" or "RECOVERY"
    host_alias: str
    address: str
    state: str
    at: float
    additional_info: str
    service_description: str | None = None
    recipients: tuple[str, ...] = ()


def format_datetime(at: float, tz: tzinfo | str | None = None) -> str:
    """ctime-style stamp with timezone abbreviation: Www Mmm dd HH:MM:SS ZZZ yyyy."""
    if isinstance(tz, str):
        tz = ZoneInfo(tz)
    moment = datetime.fromtimestamp(at, tz)
    stamp = moment.strftime("%a %b %d %H:%M:%S %Z %Y")
    if moment.strftime("%Z") == "":
        stamp = moment.strftime("%a %b %d %H:%M:%S %Y")
    return stamp


def render_message(
    msg: NotificationMessage,
    engine_name: str,
    version: str,
    tz: tzinfo | str | None = None,
) -> str:
    lines = [f"***** {engine_name} {version} *****"]
    lines.append(f"Notification Type: {msg.notification_type}")
    if msg.service_description is not None:
        lines.append(f"Service: {msg.service_description}")
    lines.append(f"Host: {msg.host_alias}")
    lines.append(f"Address: {msg.address}")
    lines.append(f"State: {msg.state}")
    lines.append(f"Date/Time: {format_datetime(msg.at, tz)}")
    lines.append(f"Additional Info: {msg.additional_info}")
    return "\n".join(lines) + "\n"
