"""sentinel-logwatch: follow log files and submit rule matches as passive
results."""

from __future__ import annotations

import argparse
import sys

from sentinel.passive import GatewayClient, LogWatcher, parse_rules
from sentinel.passive.logwatch import RuleError
from sentinel.settings import parse_listen, read_token_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-logwatch", description=__doc__)
    parser.add_argument("--rules", required=True, help="rules file: state;service;host-or-$N;pattern")
    parser.add_argument("--gateway", required=True, help="host:port of the gateway")
    parser.add_argument("--token-file", help="gateway auth token file")
    parser.add_argument("--poll-interval", type=float, default=0.5)
    parser.add_argument("logfiles", nargs="+")
    args = parser.parse_args(argv)

    try:
        with open(args.rules, "r", encoding="utf-8") as fh:
            rules = parse_rules(fh.read())
    except (OSError, RuleError) as exc:
        print(f"cannot load rules: {exc}", file=sys.stderr)
        return 2
    if not rules:
        print("rules file has no rules", file=sys.stderr)
        return 2

    token = read_token_file(args.token_file) if args.token_file else None
    client = GatewayClient(parse_listen(args.gateway), token=token)
    watcher = LogWatcher(args.logfiles, rules, client, poll_interval=args.poll_interval)
    print(f"watching {len(args.logfiles)} file(s) with {len(rules)} rule(s)", file=sys.stderr)
    try:
        watcher.run()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
