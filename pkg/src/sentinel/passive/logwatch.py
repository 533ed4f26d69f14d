"""Log watching: turn pattern-matched log lines into passive results.

Rules are tried in order and the first match wins.  Watched files are
followed from their end; rotation and truncation are detected by inode and
size changes and the new file is read from its start.  Failed submissions
are buffered (bounded) and retried, so a briefly unreachable gateway loses
nothing.
"""

from __future__ import annotations

import logging
import os
import re
import time
from collections import deque
from dataclasses import dataclass

from sentinel.checkcore.plugin import CheckStatus
from sentinel.passive.gateway import GatewayClient
from sentinel.passive.wire import PassiveResultLine, ResultKind

log = logging.getLogger(__name__)

BUFFER_LIMIT = 10_000

_STATE_NAMES = {
    "OK": CheckStatus.OK,
    "WARNING": CheckStatus.WARNING,
    "CRITICAL": CheckStatus.CRITICAL,
    "UNKNOWN": CheckStatus.UNKNOWN,
}
_CAPTURE_RE = re.compile(r"\$(\d)")


@dataclass
class LogRule:
    pattern: re.Pattern
    host: str  # literal identifier or "$N" capture reference
    service: str
    state_on_match: CheckStatus
    output_template: str | None = None  # None: whole matched line


class RuleError(ValueError):
    """A rules file line that cannot become a rule."""


def parse_rules(text: str) -> list[LogRule]:
    """Parse the rules file: ``<state>;<service>;<host-or-$N>;<pattern>``.

    The pattern is the final field and may itself contain semicolons.
    ``#`` lines are comments.
    """
    rules = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(";", 3)
        if len(parts) != 4:
            raise RuleError(f"rules line {lineno}: expected state;service;host;pattern")
        state_text, service, host = (p.strip() for p in parts[:3])
        pattern_text = parts[3]
        state = _parse_state(state_text, lineno)
        try:
            pattern = re.compile(pattern_text)
        except re.error as exc:
            raise RuleError(f"rules line {lineno}: bad pattern: {exc}") from None
        _check_captures(host, pattern, lineno)
        rules.append(LogRule(pattern=pattern, host=host, service=service, state_on_match=state))
    return rules


def _parse_state(text: str, lineno: int) -> CheckStatus:
    if text.upper() in _STATE_NAMES:
        return _STATE_NAMES[text.upper()]
    if text in ("0", "1", "2", "3"):
        return CheckStatus(int(text))
    raise RuleError(f"rules line {lineno}: unknown state {text!r}")


def _check_captures(host: str, pattern: re.Pattern, lineno: int) -> None:
    for ref in _CAPTURE_RE.findall(host):
        if int(ref) > pattern.groups:
            raise RuleError(
                f"rules line {lineno}: host references capture ${ref}"
                f" but pattern has only {pattern.groups} group(s)"
            )


def match_line(rules: list[LogRule], line: str) -> PassiveResultLine | None:
    """First matching rule wins; None when nothing matches."""
    text = line.rstrip("\n")
    for rule in rules:
        match = rule.pattern.search(text)
        if match is None:
            continue
        try:
            host = _expand(rule.host, match)
            if rule.output_template is None:
                output = text.strip()
            else:
                output = _expand(rule.output_template, match)
        except (IndexError, re.error):  # capture expansion failed: skip rule
            log.warning("rule %s: capture expansion failed on %r", rule.pattern.pattern, text)
            continue
        return PassiveResultLine(
            kind=ResultKind.SERVICE,
            host=host,
            service=rule.service,
            code=int(rule.state_on_match),
            output=output,
            received_at=int(time.time()),
        )
    return None


def _expand(template: str, match: re.Match) -> str:
    return _CAPTURE_RE.sub(lambda m: match.group(int(m.group(1))) or "", template)


class LogWatcher:
    """Follow log files and submit rule matches through the gateway."""

    def __init__(
        self,
        paths: list[str],
        rules: list[LogRule],
        client: GatewayClient,
        poll_interval: float = 0.5,
    ) -> None:
        self.paths = list(paths)
        self.rules = rules
        self.client = client
        self.poll_interval = poll_interval
        self.buffer: deque[PassiveResultLine] = deque()
        self.dropped = 0
        self.submitted = 0
        self._positions: dict[str, tuple[int, int]] = {}  # path -> (inode, offset)
        self._stopping = False

    def seek_to_end(self) -> None:
        for path in self.paths:
            try:
                stat = os.stat(path)
                self._positions[path] = (stat.st_ino, stat.st_size)
            except OSError:
                self._positions.pop(path, None)

    def poll_once(self) -> int:
        """Read new lines from every file; returns count of matched lines."""
        matched = 0
        for path in self.paths:
            for line in self._new_lines(path):
                record = match_line(self.rules, line)
                if record is not None:
                    matched += 1
                    self._enqueue(record)
        self._flush()
        return matched

    def run(self) -> None:
        self.seek_to_end()
        while not self._stopping:
            self.poll_once()
            time.sleep(self.poll_interval)

    def stop(self) -> None:
        self._stopping = True

    # -- internals -----------------------------------------------------

    def _new_lines(self, path: str):
        try:
            stat = os.stat(path)
        except OSError:
            return
        inode, offset = self._positions.get(path, (stat.st_ino, 0))
        if stat.st_ino != inode or stat.st_size < offset:
            # rotated or truncated: start over on the new file
            offset = 0
        try:
            with open(path, "r", encoding="utf-8", errors="replace") as fh:
                fh.seek(offset)
                while True:
                    line = fh.readline()
                    if not line:
                        break
                    if not line.endswith("\n"):
                        break  # partial write: re-read next poll
                    offset = fh.tell()
                    yield line
        except OSError as exc:
            log.warning("cannot read %s: %s", path, exc)
            return
        self._positions[path] = (stat.st_ino, offset)

    def _enqueue(self, record: PassiveResultLine) -> None:
        if len(self.buffer) >= BUFFER_LIMIT:
            self.buffer.popleft()
            self.dropped += 1
        self.buffer.append(record)

    def _flush(self) -> None:
        while self.buffer:
            record = self.buffer[0]
            try:
                reply = self.client.submit(record)
            except OSError:
                return  # gateway unreachable: keep buffering
            if reply.startswith("OK"):
                self.buffer.popleft()
                self.submitted += 1
            else:
                log.warning("gateway rejected %r: %s", record, reply)
                self.buffer.popleft()  # permanent rejection: do not loop
