"""sentinel-server: run the monitoring engine with its HTTP API.

Loads the main settings file, parses and validates the object config, then
serves the API (and the console, when built) in front of the live engine.
"""

from __future__ import annotations

import argparse
import logging
import sys

import uvicorn

from sentinel.api import create_app
from sentinel.engine import Engine
from sentinel.objconf import parse_files, resolve_templates, validate
from sentinel.settings import load_settings, parse_listen, read_token_file


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-server", description=__doc__)
    parser.add_argument("--config", required=True, help="main settings file (key=value)")
    parser.add_argument("--console-dir", help="directory of built console assets to serve")
    parser.add_argument("--log-level", default="info")
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

    settings = load_settings(args.config)
    if not settings.object_files:
        print("settings file names no cfg_file= object files", file=sys.stderr)
        return 2
    blocks, diags = parse_files(settings.object_files)
    config, resolve_diags = resolve_templates(blocks)
    diags += resolve_diags + validate(config)
    errors = [d for d in diags if d.severity == "error"]
    for diag in diags:
        print(diag, file=sys.stderr)
    if errors:
        print(f"refusing to start with {len(errors)} config error(s)", file=sys.stderr)
        return 2

    engine = Engine(config, settings)
    engine.start()
    token = read_token_file(settings.api_token_file)
    app = create_app(engine, token=token, console_dir=args.console_dir)
    host, port = parse_listen(settings.api_listen)
    print(
        f"engine up: {len(config.hosts)} hosts, {len(config.services)} services;"
        f" api on {host}:{port}",
        file=sys.stderr,
    )
    try:
        uvicorn.run(app, host=host, port=port, log_level=args.log_level)
    finally:
        engine.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
