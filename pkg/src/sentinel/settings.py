"""Engine runtime settings, loaded from a flat key=value file.

The main config names the object definition files via one ``cfg_file=`` line
each; everything else tunes the engine.  Paths are resolved relative to the
main config file's directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from sentinel import ENGINE_NAME, __version__


@dataclass
class EngineSettings:
    interval_length: float = 60.0
    plugin_timeout: float = 10.0
    max_concurrent_checks: int = 32
    status_dir: str = "status"
    retention_file: str = "retention.dat"
    status_interval_seconds: float = 10.0
    api_listen: str = "127.0.0.1:8080"
    api_token_file: str = ""
    gateway_listen: str = ""
    audit_log: str = ""
    dispatch_log: str = ""
    timezone: str = ""  # empty: system local time
    clock_skew_seconds: float = 900.0
    stagger: bool = True
    engine_name: str = ENGINE_NAME
    engine_version: str = __version__
    object_files: list[str] = field(default_factory=list)


class SettingsError(Exception):
    pass


_FLOAT_KEYS = {
    "interval_length",
    "plugin_timeout",
    "status_interval_seconds",
    "clock_skew_seconds",
}
_INT_KEYS = {"max_concurrent_checks"}
_STR_KEYS = {
    "status_dir",
    "retention_file",
    "api_listen",
    "api_token_file",
    "gateway_listen",
    "audit_log",
    "dispatch_log",
    "timezone",
    "engine_name",
}
_PATH_KEYS = {"status_dir", "retention_file", "api_token_file", "audit_log", "dispatch_log"}


def load_settings(path: str) -> EngineSettings:
    settings = EngineSettings()
    base = os.path.dirname(os.path.abspath(path))
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise SettingsError(f"{path}:{lineno}: expected key=value")
            if key == "cfg_file":
                settings.object_files.append(_resolve(base, value))
            elif key in _FLOAT_KEYS:
                settings.__setattr__(key, _number(path, lineno, key, value))
            elif key in _INT_KEYS:
                settings.__setattr__(key, int(_number(path, lineno, key, value)))
            elif key == "stagger":
                settings.stagger = value not in ("0", "false", "no")
            elif key in _STR_KEYS:
                if key in _PATH_KEYS and value:
                    value = _resolve(base, value)
                settings.__setattr__(key, value)
            else:
                raise SettingsError(f"{path}:{lineno}: unknown setting {key!r}")
    return settings


def _resolve(base: str, value: str) -> str:
    return value if os.path.isabs(value) else os.path.join(base, value)


def _number(path: str, lineno: int, key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise SettingsError(f"{path}:{lineno}: {key} must be a number, got {value!r}") from None


def parse_listen(value: str) -> tuple[str, int]:
    """Split host:port; a bare port listens on all interfaces."""
    host, _, port = value.rpartition(":")
    if not port.isdigit():
        raise SettingsError(f"bad listen address {value!r}, expected host:port")
    return (host or "0.0.0.0", int(port))


def read_token_file(path: str) -> str | None:
    if not path:
        return None
    with open(path, "r", encoding="utf-8") as fh:
        token = fh.read().strip()
    return token or None
