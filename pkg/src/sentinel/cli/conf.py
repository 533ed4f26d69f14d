"""sentinel-conf: lint object config files or generate them from assets."""

from __future__ import annotations

import argparse
import os
import sys

from sentinel.objconf import (
    GenerationError,
    generate_from_assets,
    parse_files,
    read_asset_csv,
    resolve_templates,
    validate,
)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sentinel-conf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="parse, resolve and validate config files")
    lint.add_argument("files", nargs="+", help="object config files")

    generate = sub.add_parser("generate", help="generate config from an asset CSV")
    generate.add_argument("--assets", required=True, help="CSV: hostname,address,host_class,contact_group")
    generate.add_argument("--out", required=True, help="output directory")

    args = parser.parse_args(argv)
    if args.command == "lint":
        return _lint(args.files)
    return _generate(args.assets, args.out)


def _lint(files: list[str]) -> int:
    blocks, diags = parse_files(files)
    config, resolve_diags = resolve_templates(blocks)
    diags += resolve_diags + validate(config)
    for diag in diags:
        print(diag, file=sys.stderr)
    summary = (
        f"{len(config.hosts)} hosts, {len(config.services)} services, "
        f"{len(config.hostgroups)} hostgroups, {len(config.commands)} commands"
    )
    if diags:
        print(f"{summary}; {len(diags)} problem(s)", file=sys.stderr)
        return 1
    print(f"{summary}; config is clean")
    return 0


def _generate(assets_csv: str, out_dir: str) -> int:
    try:
        assets = read_asset_csv(assets_csv)
        text = generate_from_assets(assets)
    except (GenerationError, OSError) as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return 1
    os.makedirs(out_dir, exist_ok=True)
    out_path = os.path.join(out_dir, "objects.cfg")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {out_path} ({len(assets)} hosts)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
