"""Runtime state as human-inspectable flat files.

Both ``status.dat`` (periodic full snapshot) and ``retention.dat`` (restart
continuity) use the same format: blank-line separated blocks of
``key=value`` lines, one block per object.  Writes go to a temporary file in
the same directory, are fsynced, then atomically renamed into place, so a
reader (or a crash) can never observe half a file.  Point ``status_dir`` at
a memory-backed mount when write load matters; the engine does not care.
"""

from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass, field

from sentinel.checkcore.plugin import CheckStatus
from sentinel.statemachine.state import HostStatus, MonitorState, StateType

log = logging.getLogger(__name__)

FORMAT_VERSION = "1"


@dataclass
class StatusSnapshot:
    generated_at: float
    hosts: dict[str, MonitorState] = field(default_factory=dict)
    services: dict[tuple[str, str], MonitorState] = field(default_factory=dict)


def write_status(snapshot: StatusSnapshot, status_dir: str) -> bool:
    """Atomically replace ``status.dat``; False (plus a log entry) on failure."""
    path = os.path.join(status_dir, "status.dat")
    try:
        _atomic_write(path, _render_snapshot(snapshot))
        return True
    except OSError as exc:
        log.error("status write failed, keeping previous file: %s", exc)
        return False


def read_status(status_dir: str) -> StatusSnapshot | None:
    """Parse ``status.dat``; None when missing or unreadable."""
    path = os.path.join(status_dir, "status.dat")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        return None
    return _parse_snapshot(text)


def write_retention(states: dict[tuple, MonitorState], path: str) -> bool:
    snapshot = StatusSnapshot(generated_at=0.0)
    for target, state in states.items():
        if target[0] == "host":
            snapshot.hosts[target[1]] = state
        else:
            snapshot.services[(target[1], target[2])] = state
    try:
        _atomic_write(path, _render_snapshot(snapshot))
        return True
    except OSError as exc:
        log.error("retention write failed: %s", exc)
        return False


def read_retention(path: str) -> dict[tuple, MonitorState]:
    """Load retained states; missing or corrupt files mean a cold start."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError:
        return {}
    try:
        snapshot = _parse_snapshot(text)
    except ValueError as exc:
        log.error("retention file %s is corrupt (%s); cold start", path, exc)
        return {}
    states: dict[tuple, MonitorState] = {}
    for host, state in snapshot.hosts.items():
        states[("host", host)] = state
    for (host, service), state in snapshot.services.items():
        states[("service", host, service)] = state
    return states


def restore_retention(
    states: dict[tuple, MonitorState], known_targets: set[tuple]
) -> tuple[dict[tuple, MonitorState], int]:
    """Keep retained states for objects still configured; count the rest."""
    kept = {t: s for t, s in states.items() if t in known_targets}
    return kept, len(states) - len(kept)


# -- format ---------------------------------------------------------------


def _atomic_write(path: str, content: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".{}.".format(os.path.basename(path)))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except Exception:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _clean(value: str) -> str:
    return value.replace("\n", " ").replace("\r", " ")


def _render_state(state: MonitorState) -> list[str]:
    lines = [
        f"status={state.current_status.name}",
        f"state_type={state.state_type.value}",
        f"attempt={state.attempt}",
        f"last_check={state.last_check!r}",
        f"last_state_change={state.last_state_change!r}",
        f"last_hard_change={state.last_hard_change!r}",
        f"last_notification={'' if state.last_notification is None else repr(state.last_notification)}",
        f"acknowledged={'1' if state.acknowledged else '0'}",
        f"ack_who={_clean(state.ack_who)}",
        f"ack_comment={_clean(state.ack_comment)}",
        "downtimes=" + ",".join(f"{s!r}:{e!r}" for s, e in state.downtimes),
        f"last_output={_clean(state.last_output)}",
    ]
    return lines


def _render_snapshot(snapshot: StatusSnapshot) -> str:
    blocks = [
        "\n".join(
            [
                "type=meta",
                f"version={FORMAT_VERSION}",
                f"generated_at={snapshot.generated_at!r}",
                f"hosts={len(snapshot.hosts)}",
                f"services={len(snapshot.services)}",
            ]
        )
    ]
    for name in sorted(snapshot.hosts):
        lines = ["type=host", f"name={name}"] + _render_state(snapshot.hosts[name])
        blocks.append("\n".join(lines))
    for host, service in sorted(snapshot.services):
        lines = [
            "type=service",
            f"host={host}",
            f"service={service}",
        ] + _render_state(snapshot.services[(host, service)])
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _parse_snapshot(text: str) -> StatusSnapshot:
    snapshot = StatusSnapshot(generated_at=0.0)
    for block in text.split("\n\n"):
        fields: dict[str, str] = {}
        # split on literal newlines only: values may hold exotic Unicode
        # (NEL, LS) that splitlines() would treat as line breaks, and
        # stripping more than CR would eat value content
        for line in block.split("\n"):
            line = line.rstrip("\r")
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"not a key=value line: {line!r}")
            fields[key] = value
        if not fields:
            continue
        block_type = fields.get("type")
        if block_type == "meta":
            snapshot.generated_at = float(fields.get("generated_at", "0") or 0)
        elif block_type == "host":
            snapshot.hosts[fields["name"]] = _parse_state(fields, host=True)
        elif block_type == "service":
            snapshot.services[(fields["host"], fields["service"])] = _parse_state(fields, host=False)
        else:
            raise ValueError(f"unknown block type {block_type!r}")
    return snapshot


def _parse_state(fields: dict[str, str], host: bool) -> MonitorState:
    status_name = fields["status"]
    status = HostStatus[status_name] if host else CheckStatus[status_name]
    downtimes = []
    if fields.get("downtimes"):
        for chunk in fields["downtimes"].split(","):
            start, end = chunk.split(":")
            downtimes.append((float(start), float(end)))
    last_notification = fields.get("last_notification", "")
    return MonitorState(
        current_status=status,
        state_type=StateType(fields.get("state_type", "HARD")),
        attempt=int(fields.get("attempt", "1")),
        last_check=float(fields.get("last_check", "0") or 0),
        last_state_change=float(fields.get("last_state_change", "0") or 0),
        last_hard_change=float(fields.get("last_hard_change", "0") or 0),
        last_notification=float(last_notification) if last_notification else None,
        acknowledged=fields.get("acknowledged") == "1",
        ack_who=fields.get("ack_who", ""),
        ack_comment=fields.get("ack_comment", ""),
        downtimes=tuple(downtimes),
        last_output=fields.get("last_output", ""),
    )
