"""Built-in network probes: TCP connect/banner, HTTP status line, ping.

Real service checking means talking to the port, not just seeing a process:
these probes connect, optionally read the greeting or status line, and
translate what happened into protocol results.  Response times are reported
in whole seconds, rounded down.
"""

from __future__ import annotations

import socket
import time
from urllib.parse import urlsplit

from sentinel.checkcore.plugin import (
    CheckResult,
    CheckStatus,
    first_line,
    format_timeout,
    run_command,
)

REFUSED_OUTPUT = "Connection refused by host"
_BANNER_LIMIT = 4096

DEFAULT_PING_COMMAND = ["ping", "-c", "1", "-W", "{timeout}", "{address}"]


def _elapsed_seconds(started: float) -> int:
    return int(time.time() - started)


def check_tcp(
    address: str,
    port: int,
    expect: str | None = None,
    timeout: float = 10.0,
) -> CheckResult:
    """Connect to address:port; optionally verify the first banner line."""
    if not 1 <= port <= 65535:
        raise ValueError(f"port out of range: {port}")
    started = time.time()
    source = f"tcp:{address}:{port}"

    def result(status: CheckStatus, output: str) -> CheckResult:
        return CheckResult(status, output, started, time.time(), source=source)

    try:
        with socket.create_connection((address, port), timeout=timeout) as conn:
            if expect is None:
                return result(
                    CheckStatus.OK,
                    f"TCP ok - {_elapsed_seconds(started)} second response time on port {port}",
                )
            conn.settimeout(max(0.01, timeout - (time.time() - started)))
            banner = _read_line(conn)
            if banner.startswith(expect):
                return result(
                    CheckStatus.OK,
                    f"TCP ok - banner {banner!r} on port {port}"
                    f" - {_elapsed_seconds(started)} second response time",
                )
            return result(
                CheckStatus.CRITICAL,
                f"unexpected banner {banner!r} on port {port} (wanted prefix {expect!r})",
            )
    except ConnectionRefusedError:
        return result(CheckStatus.CRITICAL, REFUSED_OUTPUT)
    except socket.gaierror as exc:
        return result(CheckStatus.UNKNOWN, f"cannot resolve {address}: {exc}")
    except (socket.timeout, TimeoutError):
        return result(CheckStatus.CRITICAL, format_timeout(timeout))
    except OSError as exc:
        return result(CheckStatus.CRITICAL, f"connection failed: {exc}")


def _read_line(conn: socket.socket) -> str:
    chunks = bytearray()
    while len(chunks) < _BANNER_LIMIT:
        byte = conn.recv(1)
        if not byte or byte == b"\n":
            break
        chunks.extend(byte)
    return first_line(chunks.decode("utf-8", "replace"))


def check_http(url: str, timeout: float = 10.0) -> CheckResult:
    """Issue one GET and judge the raw status line.

    2xx and 3xx are OK (no redirects followed); 4xx/5xx are CRITICAL.  The
    request speaks HTTP/1.1 with Connection: close so the first response
    line is exactly what the server said.
    """
    started = time.time()
    source = f"http:{url}"

    def result(status: CheckStatus, output: str) -> CheckResult:
        return CheckResult(status, output, started, time.time(), source=source)

    parts = urlsplit(url)
    if parts.scheme != "http" or not parts.hostname:
        return result(CheckStatus.UNKNOWN, f"malformed url: {url!r}")
    port = parts.port or 80
    path = parts.path or "/"
    if parts.query:
        path += "?" + parts.query

    try:
        with socket.create_connection((parts.hostname, port), timeout=timeout) as conn:
            request = (
                f"GET {path} HTTP/1.1\r\n"
                f"Host: {parts.netloc}\r\n"
                "User-Agent: sentinel-check\r\n"
                "Connection: close\r\n\r\n"
            )
            conn.sendall(request.encode("ascii", "replace"))
            conn.settimeout(max(0.01, timeout - (time.time() - started)))
            status_line = _read_line(conn).rstrip("\r")
    except ConnectionRefusedError:
        return result(CheckStatus.CRITICAL, REFUSED_OUTPUT)
    except socket.gaierror as exc:
        return result(CheckStatus.UNKNOWN, f"cannot resolve {parts.hostname}: {exc}")
    except (socket.timeout, TimeoutError):
        return result(CheckStatus.CRITICAL, format_timeout(timeout))
    except OSError as exc:
        return result(CheckStatus.CRITICAL, f"connection failed: {exc}")

    code = _http_status_code(status_line)
    elapsed = _elapsed_seconds(started)
    if code is None:
        return result(CheckStatus.UNKNOWN, f"unparseable response line: {status_line!r}")
    if 200 <= code < 400:
        return result(CheckStatus.OK, f"HTTP ok: {status_line} - {elapsed} second response time")
    return result(CheckStatus.CRITICAL, f"HTTP CRITICAL: {status_line} - {elapsed} second response time")


def _http_status_code(status_line: str) -> int | None:
    fields = status_line.split()
    if len(fields) >= 2 and fields[0].startswith("HTTP/"):
        try:
            return int(fields[1])
        except ValueError:
            return None
    return None


def check_ping(
    address: str,
    timeout: float = 10.0,
    ping_command: list[str] | None = None,
) -> CheckResult:
    """Ping via a configurable external command (one packet by default).

    Exit 0 means reachable (OK); any failure or timeout is CRITICAL; a
    missing ping binary is UNKNOWN, never a silent OK.
    """
    template = ping_command if ping_command is not None else DEFAULT_PING_COMMAND
    argv = [
        part.format(address=address, timeout=max(1, int(timeout)))
        for part in template
    ]
    source = f"ping:{address}"
    started = time.time()
    try:
        code, line, started, finished = run_command(argv, timeout)
    except FileNotFoundError:
        return CheckResult(
            CheckStatus.UNKNOWN,
            f"ping command not found: {argv[0]}",
            started,
            time.time(),
            source=source,
        )
    except (PermissionError, OSError) as exc:
        return CheckResult(
            CheckStatus.UNKNOWN,
            f"cannot execute {argv[0]}: {exc}",
            started,
            time.time(),
            source=source,
        )
    if code is None:
        return CheckResult(CheckStatus.CRITICAL, format_timeout(timeout), started, finished, source=source)
    if code == 0:
        return CheckResult(
            CheckStatus.OK, line or f"PING ok - {address} answered", started, finished, source=source
        )
    return CheckResult(
        CheckStatus.CRITICAL,
        line or f"PING failed - {address} unreachable",
        started,
        finished,
        source=source,
    )
