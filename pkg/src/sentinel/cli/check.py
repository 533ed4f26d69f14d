"""sentinel-check: built-in probes as a standalone plugin-protocol command.

Prints one status line and exits 0/1/2/3 (OK/WARNING/CRITICAL/UNKNOWN), so
it can serve as a check plugin itself, including for this engine.
"""

from __future__ import annotations

import argparse
import sys

from sentinel.checkcore import CheckStatus, check_cluster, check_http, check_ping, check_tcp


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-check", description=__doc__)
    sub = parser.add_subparsers(dest="probe", required=True)

    tcp = sub.add_parser("tcp", help="TCP connect / banner probe")
    tcp.add_argument("address")
    tcp.add_argument("port", type=int)
    tcp.add_argument("--expect", help="required banner prefix")
    tcp.add_argument("--timeout", type=float, default=10.0)

    http = sub.add_parser("http", help="HTTP status line probe")
    http.add_argument("url")
    http.add_argument("--timeout", type=float, default=10.0)

    ping = sub.add_parser("ping", help="ping probe via external command")
    ping.add_argument("address")
    ping.add_argument("--timeout", type=float, default=10.0)
    ping.add_argument(
        "--ping-command",
        help="override ping command; {address} and {timeout} are substituted",
    )

    cluster = sub.add_parser("cluster", help="aggregate member statuses")
    cluster.add_argument("--warn", type=int, required=True, help="failed members for WARNING")
    cluster.add_argument("--crit", type=int, required=True, help="failed members for CRITICAL")
    cluster.add_argument(
        "states",
        nargs="+",
        help="member statuses: names (OK, WARNING, ...) or codes 0..3",
    )

    args = parser.parse_args(argv)
    try:
        result = _run(args)
    except ValueError as exc:
        print(f"UNKNOWN: {exc}")
        return int(CheckStatus.UNKNOWN)
    print(result.output)
    return int(result.status)


def _run(args):
    if args.probe == "tcp":
        return check_tcp(args.address, args.port, expect=args.expect, timeout=args.timeout)
    if args.probe == "http":
        return check_http(args.url, timeout=args.timeout)
    if args.probe == "ping":
        command = args.ping_command.split() if args.ping_command else None
        return check_ping(args.address, timeout=args.timeout, ping_command=command)
    states = [_parse_state(s) for s in args.states]
    return check_cluster(states, warn_threshold=args.warn, crit_threshold=args.crit)


def _parse_state(text: str) -> CheckStatus:
    if text.isdigit():
        return CheckStatus(int(text))
    try:
        return CheckStatus[text.upper()]
    except KeyError:
        raise ValueError(f"unknown status {text!r}") from None


if __name__ == "__main__":
    sys.exit(main())
