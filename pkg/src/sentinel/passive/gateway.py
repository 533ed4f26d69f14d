"""TCP gateway carrying passive results from remote producers.

Each connection optionally authenticates with ``AUTH <token>``, then sends
one wire line per result.  Valid lines are acknowledged ``OK`` and handed to
the sink; bad lines get ``ERR <reason>`` and the connection stays open, so
one garbled record never costs a batch.
"""

from __future__ import annotations

import logging
import socket
import socketserver
import threading
from typing import Callable

from sentinel.passive.wire import PassiveResultLine, WireError, decode_line, encode_line

log = logging.getLogger(__name__)

MAX_LINE_BYTES = 8192
ResultSink = Callable[[PassiveResultLine], None]


class Gateway:
    """Threaded line-protocol listener feeding a result sink."""

    def __init__(
        self,
        listen: tuple[str, int],
        result_sink: ResultSink,
        token: str | None = None,
    ) -> None:
        self.result_sink = result_sink
        self.token = token
        self.accepted = 0
        self.rejected = 0
        self._count_lock = threading.Lock()
        gateway = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self) -> None:
                authed = gateway.token is None
                while True:
                    try:
                        raw = self.rfile.readline(MAX_LINE_BYTES + 1)
                    except OSError:
                        return
                    if not raw:
                        return
                    if len(raw) > MAX_LINE_BYTES:
                        if not raw.endswith(b"\n"):
                            self._drain_long_line()
                        self._reply("ERR too long")
                        continue
                    line = raw.decode("utf-8", "replace").strip()
                    if not line:
                        continue
                    if not authed:
                        if line.startswith("AUTH ") and line[5:] == gateway.token:
                            authed = True
                            self._reply("OK")
                            continue
                        self._reply("ERR auth")
                        return
                    if line.startswith("AUTH "):
                        self._reply("OK")  # harmless re-auth
                        continue
                    try:
                        record = decode_line(line)
                    except WireError as exc:
                        with gateway._count_lock:
                            gateway.rejected += 1
                        self._reply(f"ERR parse: {exc}")
                        continue
                    try:
                        gateway.result_sink(record)
                    except Exception:
                        log.exception("result sink failed")
                        self._reply("ERR sink")
                        continue
                    with gateway._count_lock:
                        gateway.accepted += 1
                    self._reply("OK")

            def _reply(self, text: str) -> None:
                try:
                    self.wfile.write((text + "\n").encode("utf-8"))
                    self.wfile.flush()
                except OSError:
                    pass

            def _drain_long_line(self) -> None:
                # discard the rest of an oversized line up to its newline
                while True:
                    chunk = self.rfile.readline(MAX_LINE_BYTES + 1)
                    if not chunk or chunk.endswith(b"\n"):
                        return

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self._server = Server(listen, Handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="gateway", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread = None


class GatewayClient:
    """Producer-side connection speaking the gateway protocol."""

    def __init__(self, address: tuple[str, int], token: str | None = None, timeout: float = 10.0):
        self.address = address
        self.token = token
        self.timeout = timeout
        self._sock: socket.socket | None = None
        self._reader = None

    def connect(self) -> None:
        if self._sock is not None:
            return
        self._sock = socket.create_connection(self.address, timeout=self.timeout)
        self._reader = self._sock.makefile("r", encoding="utf-8", newline="\n")
        if self.token is not None:
            reply = self._exchange(f"AUTH {self.token}\n")
            if reply != "OK":
                self.close()
                raise ConnectionError(f"gateway refused auth: {reply}")

    def submit(self, record: PassiveResultLine) -> str:
        """Send one record; returns the gateway's reply line."""
        self.connect()
        return self._exchange(encode_line(record))

    def _exchange(self, line: str) -> str:
        assert self._sock is not None and self._reader is not None
        try:
            self._sock.sendall(line.encode("utf-8"))
            reply = self._reader.readline()
        except OSError:
            self.close()
            raise
        if not reply:
            self.close()
            raise ConnectionError("gateway closed the connection")
        return reply.strip()

    def close(self) -> None:
        if self._reader is not None:
            try:
                self._reader.close()
            except OSError:
                pass
            self._reader = None
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass
            self._sock = None

    def __enter__(self) -> "GatewayClient":
        self.connect()
        return self

    def __exit__(self, *exc) -> None:
        self.close()
