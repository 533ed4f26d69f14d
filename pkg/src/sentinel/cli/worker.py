"""sentinel-worker: run checks on a remote box and forward the results.

The checks file holds one check per line, ``host;service;command`` with an
empty service field for host checks.  Results travel to the central engine
through the gateway wire protocol; load can be spread by pointing several
workers at disjoint checks files.
"""

from __future__ import annotations

import argparse
import sys
import time

from sentinel.checkcore import CheckStatus, execute_plugin
from sentinel.passive import GatewayClient, PassiveResultLine, ResultKind
from sentinel.settings import parse_listen, read_token_file


def parse_checks(text: str) -> list[tuple[str, str, str]]:
    checks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(";", 2)
        if len(parts) != 3 or not parts[0] or not parts[2]:
            raise ValueError(f"checks line {lineno}: expected host;service;command")
        checks.append((parts[0].strip(), parts[1].strip(), parts[2].strip()))
    return checks


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-worker", description=__doc__)
    parser.add_argument("--gateway", required=True, help="host:port of the engine gateway")
    parser.add_argument("--token-file")
    parser.add_argument("--checks", required=True, help="checks file: host;service;command")
    parser.add_argument("--interval", type=float, default=60.0, help="seconds between rounds")
    parser.add_argument("--rounds", type=int, default=0, help="stop after N rounds (0: forever)")
    parser.add_argument("--timeout", type=float, default=10.0, help="per-check timeout")
    args = parser.parse_args(argv)

    try:
        with open(args.checks, "r", encoding="utf-8") as fh:
            checks = parse_checks(fh.read())
    except (OSError, ValueError) as exc:
        print(f"cannot load checks: {exc}", file=sys.stderr)
        return 2
    if not checks:
        print("checks file is empty", file=sys.stderr)
        return 2

    token = read_token_file(args.token_file) if args.token_file else None
    client = GatewayClient(parse_listen(args.gateway), token=token)

    submitted = 0
    rounds = 0
    try:
        while True:
            round_start = time.time()
            for host, service, command in checks:
                result = execute_plugin(command.split(), timeout=args.timeout)
                if service:
                    record = PassiveResultLine(
                        kind=ResultKind.SERVICE,
                        host=host,
                        service=service,
                        code=int(result.status),
                        output=result.output,
                        received_at=int(result.finished_at),
                    )
                else:
                    record = PassiveResultLine(
                        kind=ResultKind.HOST,
                        host=host,
                        code=0 if result.status is CheckStatus.OK else 1,
                        output=result.output,
                        received_at=int(result.finished_at),
                    )
                reply = _submit_with_retry(client, record)
                if reply == "OK":
                    submitted += 1
                else:
                    print(f"gateway rejected result for {host}/{service}: {reply}", file=sys.stderr)
            rounds += 1
            if args.rounds and rounds >= args.rounds:
                break
            time.sleep(max(0.0, args.interval - (time.time() - round_start)))
    except KeyboardInterrupt:
        pass
    finally:
        client.close()
    print(f"submitted {submitted} results in {rounds} round(s)")
    return 0


def _submit_with_retry(client: GatewayClient, record: PassiveResultLine, attempts: int = 20) -> str:
    delay = 0.05
    for attempt in range(attempts):
        try:
            return client.submit(record)
        except (OSError, ConnectionError):
            client.close()
            if attempt == attempts - 1:
                raise
            time.sleep(delay)
            delay = min(delay * 2, 2.0)
    raise ConnectionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
