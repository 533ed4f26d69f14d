"""Channel dispatch: hand a rendered message to an external command.

Any mailer, SMS client or pager wrapper works: the channel is a shell
command template with placeholders, the rendered message arrives on its
standard input.  Failures are retried once and recorded; a broken channel
never brings the engine down.
"""

from __future__ import annotations

import shlex
import subprocess
import time
from dataclasses import dataclass

from sentinel.notify.render import NotificationMessage, format_datetime

PLACEHOLDERS = (
    "$NOTIFICATIONTYPE$",
    "$SERVICEDESC$",
    "$HOSTALIAS$",
    "$HOSTADDRESS$",
    "$SERVICESTATE$",
    "$DATETIME$",
    "$OUTPUT$",
)


@dataclass
class DispatchRecord:
    recipient_group: str
    channel: str
    ok: bool
    exit_code: int | None
    at: float
    attempts: int
    detail: str = ""


def expand_channel_command(template: str, msg: NotificationMessage, tz=None) -> str:
    """Substitute message fields into the channel command template.

    Values are shell-quoted, so templates may use shell syntax (pipes,
    redirects) without field content breaking the command line.
    """
    values = {
        "$NOTIFICATIONTYPE$": msg.notification_type,
        "$SERVICEDESC$": msg.service_description or "",
        "$HOSTALIAS$": msg.host_alias,
        "$HOSTADDRESS$": msg.address,
        "$SERVICESTATE$": msg.state,
        "$DATETIME$": format_datetime(msg.at, tz),
        "$OUTPUT$": msg.additional_info,
    }
    command = template
    for placeholder, value in values.items():
        command = command.replace(placeholder, shlex.quote(value))
    return command


def dispatch(
    msg: NotificationMessage,
    channel: str,
    rendered: str,
    recipient_group: str = "",
    timeout: float = 30.0,
    tz=None,
) -> DispatchRecord:
    """Run the channel command, feeding the rendered message on stdin.

    One retry on failure, then the failure is recorded and life goes on.
    """
    command = expand_channel_command(channel, msg, tz)
    attempts = 0
    exit_code: int | None = None
    detail = ""
    while attempts < 2:
        attempts += 1
        try:
            proc = subprocess.run(
                ["/bin/sh", "-c", command],
                input=rendered.encode("utf-8"),
                stdout=subprocess.DEVNULL,
                stderr=subprocess.PIPE,
                timeout=timeout,
            )
        except subprocess.TimeoutExpired:
            exit_code, detail = None, f"channel timed out after {timeout:g}s"
            continue
        except OSError as exc:
            exit_code, detail = None, str(exc)
            continue
        exit_code = proc.returncode
        if proc.returncode == 0:
            return DispatchRecord(recipient_group, channel, True, 0, time.time(), attempts)
        detail = proc.stderr.decode("utf-8", "replace").strip()[:200]
    return DispatchRecord(recipient_group, channel, False, exit_code, time.time(), attempts, detail)
