"""Wire format for passive check results.

One LF-terminated line per result:

    [<epoch>] PROCESS_SERVICE_CHECK_RESULT;<host>;<service>;<code>;<output>
    [<epoch>] PROCESS_HOST_CHECK_RESULT;<host>;<code>;<output>

Service codes are the plugin protocol 0..3; host codes are 0 (up) / 1
(down).  Only the trailing output field may contain semicolons: it consumes
the rest of the line.  No field may contain TAB, CR or LF.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
import time


class ResultKind(enum.Enum):
    SERVICE = "SERVICE"
    HOST = "HOST"


SERVICE_KEYWORD = "PROCESS_SERVICE_CHECK_RESULT"
HOST_KEYWORD = "PROCESS_HOST_CHECK_RESULT"

_FORBIDDEN = ("\t", "\r", "\n")


class WireError(ValueError):
    """A line that does not follow the wire format."""


@dataclass
class PassiveResultLine:
    kind: ResultKind
    host: str
    code: int
    output: str
    service: str = ""
    received_at: int = field(default_factory=lambda: int(time.time()))

    def validate(self) -> None:
        if self.kind is ResultKind.SERVICE:
            if not self.service:
                raise WireError("service results need a service identifier")
            if not 0 <= self.code <= 3:
                raise WireError(f"service code out of range: {self.code}")
        else:
            if self.code not in (0, 1):
                raise WireError(f"host code out of range: {self.code}")
        for label, value in (("host", self.host), ("service", self.service), ("output", self.output)):
            if any(c in value for c in _FORBIDDEN):
                raise WireError(f"{label} field contains TAB/CR/LF")
        for label, value in (("host", self.host), ("service", self.service)):
            if ";" in value:
                raise WireError(f"{label} field contains ';'")
        if not self.host:
            raise WireError("host identifier is empty")


def encode_line(record: PassiveResultLine) -> str:
    """Render one record as its wire line (LF terminated)."""
    record.validate()
    if record.kind is ResultKind.SERVICE:
        return (
            f"[{record.received_at}] {SERVICE_KEYWORD};"
            f"{record.host};{record.service};{record.code};{record.output}\n"
        )
    return f"[{record.received_at}] {HOST_KEYWORD};{record.host};{record.code};{record.output}\n"


def decode_line(line: str) -> PassiveResultLine:
    """Parse one wire line; raises WireError naming what is wrong."""
    text = line.rstrip("\n").rstrip("\r")
    if not text.startswith("["):
        raise WireError(f"missing [epoch] stamp: {text[:40]!r}")
    close = text.find("]")
    if close < 0:
        raise WireError(f"unterminated [epoch] stamp: {text[:40]!r}")
    try:
        epoch = int(text[1:close])
    except ValueError:
        raise WireError(f"bad epoch {text[1:close]!r}") from None
    rest = text[close + 1 :].lstrip(" ")

    keyword, _, payload = rest.partition(";")
    if keyword == SERVICE_KEYWORD:
        parts = payload.split(";", 3)
        if len(parts) != 4:
            raise WireError(f"expected host;service;code;output after {keyword}")
        host, service, code_text, output = parts
        record = PassiveResultLine(
            kind=ResultKind.SERVICE,
            host=host,
            service=service,
            code=_parse_code(code_text),
            output=output,
            received_at=epoch,
        )
    elif keyword == HOST_KEYWORD:
        parts = payload.split(";", 2)
        if len(parts) != 3:
            raise WireError(f"expected host;code;output after {keyword}")
        host, code_text, output = parts
        record = PassiveResultLine(
            kind=ResultKind.HOST,
            host=host,
            code=_parse_code(code_text),
            output=output,
            received_at=epoch,
        )
    else:
        raise WireError(f"unknown keyword {keyword!r}")
    record.validate()
    return record


def _parse_code(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise WireError(f"bad status code {text!r}") from None
