"""sentinel: thin command line client for a running engine's API."""

from __future__ import annotations

import argparse
import json
import os
import sys

import requests

DEFAULT_BASE = os.environ.get("SENTINEL_API", "http://127.0.0.1:8080")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel", description=__doc__)
    parser.add_argument("--api", default=DEFAULT_BASE, help="engine API base URL")
    parser.add_argument("--token", default=os.environ.get("SENTINEL_TOKEN"), help="bearer token")
    sub = parser.add_subparsers(dest="command", required=True)

    status = sub.add_parser("status", help="show object states")
    status.add_argument("--problems", action="store_true", help="problem objects only")
    status.add_argument("--hostgroup")
    status.add_argument("--json", action="store_true", dest="as_json")

    ack = sub.add_parser("ack", help="acknowledge a hard problem")
    ack.add_argument("host")
    ack.add_argument("service", nargs="?")
    ack.add_argument("--who", required=True)
    ack.add_argument("--comment", default="")

    downtime = sub.add_parser("downtime", help="schedule a downtime window")
    downtime.add_argument("host")
    downtime.add_argument("service", nargs="?")
    downtime.add_argument("--start", type=float, required=True, help="epoch seconds")
    downtime.add_argument("--end", type=float, required=True, help="epoch seconds")

    recheck = sub.add_parser("recheck", help="force an immediate check")
    recheck.add_argument("host")
    recheck.add_argument("service", nargs="?")

    submit = sub.add_parser("submit", help="submit a passive result")
    submit.add_argument("host")
    submit.add_argument("service", nargs="?")
    submit.add_argument("--code", type=int, required=True)
    submit.add_argument("--output", default="")

    args = parser.parse_args(argv)
    session = requests.Session()
    if args.token:
        session.headers["Authorization"] = f"Bearer {args.token}"
    base = args.api.rstrip("/") + "/api/v1"

    try:
        return _run(args, session, base)
    except requests.ConnectionError:
        print(f"cannot reach engine API at {args.api}", file=sys.stderr)
        return 3


def _run(args, session, base) -> int:
    if args.command == "status":
        params = {}
        if args.problems:
            params["problem_only"] = "true"
        if args.hostgroup:
            params["hostgroup"] = args.hostgroup
        response = session.get(f"{base}/status", params=params, timeout=30)
        if not response.ok:
            return _fail(response)
        document = response.json()
        if args.as_json:
            json.dump(document, sys.stdout, indent=2)
            print()
            return 0
        counts = document["counts"]
        print(
            "hosts: {total} total, {up} up, {down} down, {unreachable} unreachable".format(**counts["hosts"])
        )
        print(
            "services: {total} total, {ok} ok, {warning} warning,"
            " {critical} critical, {unknown} unknown".format(**counts["services"])
        )
        for obj in document["objects"]:
            name = obj["host"] if obj["service"] is None else f"{obj['host']}/{obj['service']}"
            flags = "".join(
                flag
                for flag, on in (("A", obj["acknowledged"]), ("D", obj["in_downtime"]))
                if on
            )
            print(
                f"{name:40} {obj['status']:12} {obj['state_type']:4}"
                f" {obj['attempt']}/{obj['max_attempts']} {flags:2} {obj['last_output']}"
            )
        return 0

    if args.command == "ack":
        body = {"host": args.host, "service": args.service, "who": args.who, "comment": args.comment}
        return _post(session, f"{base}/ack", body)
    if args.command == "downtime":
        body = {"host": args.host, "service": args.service, "start": args.start, "end": args.end}
        return _post(session, f"{base}/downtime", body)
    if args.command == "recheck":
        return _post(session, f"{base}/check", {"host": args.host, "service": args.service})
    body = {
        "kind": "HOST" if args.service is None else "SERVICE",
        "host": args.host,
        "service": args.service,
        "code": args.code,
        "output": args.output,
    }
    return _post(session, f"{base}/result", body)


def _post(session, url, body) -> int:
    response = session.post(url, json=body, timeout=30)
    if response.status_code == 202:
        print("accepted")
        return 0
    return _fail(response)


def _fail(response) -> int:
    try:
        message = response.json().get("error", response.text)
    except ValueError:
        message = response.text
    print(f"error {response.status_code}: {message}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
