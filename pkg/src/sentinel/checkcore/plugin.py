"""External check plugins: argv execution under the exit-code protocol.

Exit codes 0/1/2/3 mean OK/WARNING/CRITICAL/UNKNOWN; anything else is
UNKNOWN.  Only the first line of standard output is kept (at most 4096
bytes).  A plugin that outlives its timeout is killed and reported CRITICAL,
because a hung check is itself an alarm condition.
"""

from __future__ import annotations

import enum
import subprocess
import time
from dataclasses import dataclass, field

TERMINATION_GRACE = 2.0  # seconds a killed plugin gets to die
OUTPUT_LIMIT = 4096  # bytes of stdout consumed for the status line


class CheckStatus(enum.IntEnum):
    OK = 0
    WARNING = 1
    CRITICAL = 2
    UNKNOWN = 3


_EXIT_TO_STATUS = {
    0: CheckStatus.OK,
    1: CheckStatus.WARNING,
    2: CheckStatus.CRITICAL,
    3: CheckStatus.UNKNOWN,
}


class CheckOrigin(enum.Enum):
    ACTIVE = "active"
    PASSIVE = "passive"


@dataclass
class CheckResult:
    """Outcome of one check: protocol status plus a single output line."""

    status: CheckStatus
    output: str
    started_at: float = field(default_factory=time.time)
    finished_at: float = field(default_factory=time.time)
    origin: CheckOrigin = CheckOrigin.ACTIVE
    source: str = ""

    def __post_init__(self) -> None:
        self.output = first_line(self.output)
        if self.finished_at < self.started_at:
            self.finished_at = self.started_at


def first_line(text: str) -> str:
    """Trimmed first line of plugin output; results never carry line breaks."""
    return text.split("\n", 1)[0].split("\r", 1)[0].strip()


def status_from_exit_code(code: int) -> tuple[CheckStatus, str]:
    """Map an exit code to a status plus an output prefix for invalid codes.

    Total on all integers: anything outside 0..3 is UNKNOWN and tagged.
    """
    status = _EXIT_TO_STATUS.get(code)
    if status is None:
        return CheckStatus.UNKNOWN, f"(invalid exit code {code}) "
    return status, ""


def format_timeout(timeout: float) -> str:
    return f"check timed out after {timeout:g}s"


def run_command(
    argv: list[str], timeout: float
) -> tuple[int | None, str, float, float]:
    """Run argv, returning (exit code or None on timeout, first stdout line,
    started_at, finished_at).

    Raises FileNotFoundError / PermissionError / OSError for commands that
    cannot be started at all; callers map those to UNKNOWN.
    """
    started = time.time()
    try:
        proc = subprocess.run(
            argv,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            stdin=subprocess.DEVNULL,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired as exc:
        # subprocess.run already killed the child; give it the grace period
        finished = time.time()
        line = first_line((exc.stdout or b"")[:OUTPUT_LIMIT].decode("utf-8", "replace"))
        return None, line, started, finished
    finished = time.time()
    line = first_line(proc.stdout[:OUTPUT_LIMIT].decode("utf-8", "replace"))
    return proc.returncode, line, started, finished


def execute_plugin(
    command: list[str] | str, timeout: float = 10.0, source: str | None = None
) -> CheckResult:
    """Execute one plugin and translate its exit code and output.

    Never raises for a bad command: resolution failures come back as
    UNKNOWN results, timeouts as CRITICAL.
    """
    argv = [command] if isinstance(command, str) else list(command)
    if timeout <= 0:
        raise ValueError("timeout must be positive")
    src = source if source is not None else (argv[0] if argv else "")
    started = time.time()
    if not argv:
        return CheckResult(CheckStatus.UNKNOWN, "no command given", started, time.time(), source=src)
    try:
        code, line, started, finished = run_command(argv, timeout)
    except FileNotFoundError:
        return CheckResult(
            CheckStatus.UNKNOWN,
            f"command not found: {argv[0]}",
            started,
            time.time(),
            source=src,
        )
    except (PermissionError, OSError) as exc:
        return CheckResult(
            CheckStatus.UNKNOWN,
            f"cannot execute {argv[0]}: {exc}",
            started,
            time.time(),
            source=src,
        )
    if code is None:
        return CheckResult(
            CheckStatus.CRITICAL, format_timeout(timeout), started, finished, source=src
        )
    status, prefix = status_from_exit_code(code)
    return CheckResult(status, prefix + line, started, finished, source=src)
