"""sentinel-gateway: standalone passive-result listener.

Valid results are re-encoded to stdout, or relayed to an upstream gateway
with --forward (the engine's embedded gateway, typically).
"""

from __future__ import annotations

import argparse
import signal
import sys
import threading

from sentinel.passive import Gateway, GatewayClient, encode_line
from sentinel.settings import parse_listen, read_token_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-gateway", description=__doc__)
    parser.add_argument("--listen", required=True, help="host:port to listen on")
    parser.add_argument("--token-file", help="shared token clients must present")
    parser.add_argument("--forward", help="host:port of an upstream gateway")
    parser.add_argument("--forward-token-file", help="token for the upstream gateway")
    args = parser.parse_args(argv)

    token = read_token_file(args.token_file) if args.token_file else None
    upstream = None
    if args.forward:
        upstream_token = read_token_file(args.forward_token_file) if args.forward_token_file else None
        upstream = GatewayClient(parse_listen(args.forward), token=upstream_token)

    lock = threading.Lock()

    def sink(record):
        with lock:
            if upstream is not None:
                upstream.submit(record)
            else:
                sys.stdout.write(encode_line(record))
                sys.stdout.flush()

    gateway = Gateway(parse_listen(args.listen), sink, token=token)
    gateway.start()
    print(f"listening on {gateway.address[0]}:{gateway.address[1]}", file=sys.stderr)

    stop = threading.Event()
    signal.signal(signal.SIGTERM, lambda *_: stop.set())
    signal.signal(signal.SIGINT, lambda *_: stop.set())
    stop.wait()
    gateway.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
