"""Parser for the flat-file object definition format.

The format is line oriented:

    # comment
    define <kind>{
        key   value with spaces
        other value
    }

One attribute per line; the key is the first whitespace-delimited token and
the value is the rest of the line, trimmed.  Parsing never aborts: malformed
regions are skipped and reported as diagnostics with line numbers.
"""

from __future__ import annotations

import re

from sentinel.objconf.model import Diagnostic, RawObjectBlock

_DEFINE_RE = re.compile(r"^define\s+(\S+?)\s*\{\s*(.*)$")


def parse_objects(
    text: str, filename: str | None = None
) -> tuple[list[RawObjectBlock], list[Diagnostic]]:
    """Parse config text into raw blocks plus diagnostics.

    Well-formed blocks come back in file order.  Bad lines and unterminated
    blocks produce diagnostics and are skipped without stopping the parse.
    """
    blocks: list[RawObjectBlock] = []
    diags: list[Diagnostic] = []

    current: RawObjectBlock | None = None
    seen_keys: dict[str, int] = {}

    def close_unterminated() -> None:
        nonlocal current
        if current is not None:
            diags.append(
                Diagnostic(
                    "error",
                    f"unterminated 'define {current.kind}' block",
                    filename,
                    current.line,
                )
            )
            current = None

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue

        if line.startswith("define"):
            close_unterminated()
            m = _DEFINE_RE.match(line)
            if not m:
                diags.append(
                    Diagnostic("error", f"malformed define line: {line!r}", filename, lineno)
                )
                continue
            kind, trailing = m.group(1), m.group(2).strip()
            current = RawObjectBlock(kind=kind, attributes=[], file=filename, line=lineno)
            seen_keys = {}
            if trailing and trailing != "}":
                diags.append(
                    Diagnostic(
                        "warning",
                        f"unexpected text after '{{' ignored: {trailing!r}",
                        filename,
                        lineno,
                    )
                )
            if trailing == "}":
                blocks.append(current)
                current = None
            continue

        if line == "}":
            if current is None:
                diags.append(Diagnostic("error", "'}' outside of any block", filename, lineno))
            else:
                blocks.append(current)
                current = None
            continue

        if current is None:
            diags.append(
                Diagnostic("error", f"stray line outside block: {line!r}", filename, lineno)
            )
            continue

        parts = line.split(None, 1)
        if len(parts) < 2 or not parts[1].strip():
            diags.append(
                Diagnostic(
                    "error", f"attribute line with no value: {parts[0]!r}", filename, lineno
                )
            )
            continue
        key, value = parts[0], parts[1].strip()
        if key in seen_keys:
            diags.append(
                Diagnostic(
                    "warning",
                    f"duplicate attribute {key!r} in 'define {current.kind}' block"
                    f" (first at line {seen_keys[key]}); last occurrence wins",
                    filename,
                    lineno,
                )
            )
            current.attributes = [(k, v) for k, v in current.attributes if k != key]
        seen_keys[key] = lineno
        current.attributes.append((key, value))

    close_unterminated()
    return blocks, diags


def parse_files(paths: list[str]) -> tuple[list[RawObjectBlock], list[Diagnostic]]:
    """Parse several config files, concatenating blocks in argument order."""
    blocks: list[RawObjectBlock] = []
    diags: list[Diagnostic] = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            diags.append(Diagnostic("error", f"cannot read {path}: {exc}", path))
            continue
        b, d = parse_objects(text, filename=path)
        blocks.extend(b)
        diags.extend(d)
    return blocks, diags
