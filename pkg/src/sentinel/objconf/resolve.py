"""Template inheritance resolution: raw blocks to typed runtime objects.

Templates are blocks carrying a ``name`` attribute; instances point at them
with ``use``.  Attribute lookup is local-first, then nearest template along
the ``use`` chain.  ``name``, ``use`` and ``register`` are never inherited.
Blocks with ``register 0`` yield no runtime objects but stay usable as
templates.
"""

from __future__ import annotations

from sentinel.objconf.model import (
    CommandDef,
    ContactGroupDef,
    Diagnostic,
    HOST_NOTIFY_LETTERS,
    HostDef,
    HostGroupDef,
    KNOWN_KINDS,
    RawObjectBlock,
    ResolvedConfig,
    SERVICE_NOTIFY_LETTERS,
    ServiceDef,
    TimePeriodDef,
    WEEKDAY_NAMES,
    builtin_24x7,
)

_COMMON_SERVICE_KEYS = {
    "service_description",
    "host_name",
    "check_command",
    "check_period",
    "max_check_attempts",
    "normal_check_interval",
    "retry_check_interval",
    "notification_interval",
    "notification_period",
    "notification_options",
    "contact_groups",
    "is_volatile",
    "active_checks_enabled",
    "passive_checks_enabled",
}

_HOST_KEYS = {
    "host_name",
    "alias",
    "address",
    "parents",
    "check_command",
    "check_period",
    "max_check_attempts",
    "normal_check_interval",
    "retry_check_interval",
    "notification_interval",
    "notification_period",
    "notification_options",
    "contact_groups",
    "active_checks_enabled",
    "passive_checks_enabled",
}

_HOSTGROUP_KEYS = {"hostgroup_name", "alias", "contact_groups", "members"}
_CONTACTGROUP_KEYS = {"contactgroup_name", "alias", "channels"}
_COMMAND_KEYS = {"command_name", "command_line"}
_TIMEPERIOD_KEYS = {"timeperiod_name", "period_name", "alias"} | set(WEEKDAY_NAMES)

_KNOWN_KEYS_BY_KIND = {
    "service": _COMMON_SERVICE_KEYS,
    "host": _HOST_KEYS,
    "hostgroup": _HOSTGROUP_KEYS,
    "contactgroup": _CONTACTGROUP_KEYS,
    "command": _COMMAND_KEYS,
    "timeperiod": _TIMEPERIOD_KEYS,
}


class _FieldError(Exception):
    """Raised while coercing one attribute; message becomes a diagnostic."""


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in value.split(",") if p.strip())


def _parse_bool(key: str, value: str) -> bool:
    if value == "1":
        return True
    if value == "0":
        return False
    raise _FieldError(f"{key} must be 0 or 1, got {value!r}")


def _parse_int(key: str, value: str, minimum: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise _FieldError(f"{key} must be an integer, got {value!r}") from None
    if n < minimum:
        raise _FieldError(f"{key} must be >= {minimum}, got {n}")
    return n


def _parse_options(key: str, value: str, allowed: frozenset[str]) -> frozenset[str]:
    letters = _split_list(value)
    unknown = [l for l in letters if l not in allowed]
    if unknown:
        raise _FieldError(
            f"{key} has unknown letters {','.join(unknown)}"
            f" (allowed: {','.join(sorted(allowed))})"
        )
    return frozenset(letters)


def _parse_command_ref(value: str) -> tuple[str, tuple[str, ...]]:
    """Split ``command!arg1!arg2`` into the command identifier and arguments."""
    parts = value.split("!")
    return parts[0].strip(), tuple(p.strip() for p in parts[1:])


def _parse_time_ranges(key: str, value: str) -> tuple[tuple[int, int], ...]:
    ranges: list[tuple[int, int]] = []
    for chunk in value.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            start_s, end_s = chunk.split("-", 1)
            sh, sm = start_s.strip().split(":")
            eh, em = end_s.strip().split(":")
            start = int(sh) * 60 + int(sm)
            end = int(eh) * 60 + int(em)
        except ValueError:
            raise _FieldError(f"{key}: bad time range {chunk!r}, expected HH:MM-HH:MM") from None
        if not (0 <= start < end <= 1440):
            raise _FieldError(f"{key}: range {chunk!r} outside 00:00-24:00 or empty")
        ranges.append((start, end))
    ranges.sort()
    for (s1, e1), (s2, _) in zip(ranges, ranges[1:]):
        if s2 < e1:
            raise _FieldError(f"{key}: overlapping time ranges")
    return tuple(ranges)


def _parse_channels(value: str) -> tuple[tuple[str, str | None], ...]:
    """Channel list ``cmd[@period],cmd2`` with optional per-channel period."""
    channels: list[tuple[str, str | None]] = []
    for chunk in _split_list(value):
        if "@" in chunk:
            cmd, period = chunk.split("@", 1)
            channels.append((cmd.strip(), period.strip()))
        else:
            channels.append((chunk, None))
    return tuple(channels)


def resolve_templates(
    blocks: list[RawObjectBlock],
) -> tuple[ResolvedConfig, list[Diagnostic]]:
    """Resolve template inheritance and coerce blocks into typed objects."""
    diags: list[Diagnostic] = []
    config = ResolvedConfig()

    templates: dict[str, dict[str, RawObjectBlock]] = {}
    for block in blocks:
        name = block.get("name")
        if name is None:
            continue
        per_kind = templates.setdefault(block.kind, {})
        if name in per_kind:
            diags.append(
                Diagnostic(
                    "warning",
                    f"duplicate template name {name!r} for kind {block.kind!r};"
                    " first definition wins",
                    block.file,
                    block.line,
                )
            )
            continue
        per_kind[name] = block

    for block in blocks:
        if block.kind not in KNOWN_KINDS:
            diags.append(
                Diagnostic(
                    "warning",
                    f"unknown object kind {block.kind!r}; block preserved but unused",
                    block.file,
                    block.line,
                )
            )
            continue

        register = block.get("register", "1")
        if register not in ("0", "1"):
            diags.append(
                Diagnostic("error", f"register must be 0 or 1, got {register!r}", block.file, block.line)
            )
            continue
        if register == "0":
            if block.get("name") is None:
                diags.append(
                    Diagnostic(
                        "warning",
                        "register 0 block has no 'name'; it can never be used",
                        block.file,
                        block.line,
                    )
                )
            continue

        attrs = _flatten(block, templates.get(block.kind, {}), diags)
        if attrs is None:
            continue

        known = _KNOWN_KEYS_BY_KIND[block.kind]
        for key in attrs:
            if key not in known:
                diags.append(
                    Diagnostic(
                        "warning",
                        f"unknown attribute {key!r} on 'define {block.kind}'",
                        block.file,
                        block.line,
                    )
                )

        try:
            _build_object(block, attrs, config, diags)
        except _FieldError as exc:
            diags.append(Diagnostic("error", str(exc), block.file, block.line))

    if "24x7" not in config.timeperiods:
        config.timeperiods["24x7"] = builtin_24x7()

    return config, diags


def _flatten(
    block: RawObjectBlock,
    templates: dict[str, RawObjectBlock],
    diags: list[Diagnostic],
) -> dict[str, str] | None:
    """Walk the ``use`` chain collecting attributes, nearest first.

    Returns None (object dropped) on unknown template, cycle, or
    multi-inheritance.
    """
    attrs: dict[str, str] = {}
    cur = block
    chain: list[str] = []
    visited: set[str] = set()
    while True:
        for key, value in cur.attributes:
            if key in ("use", "name", "register"):
                continue
            attrs.setdefault(key, value)
        use = cur.get("use")
        if use is None:
            return attrs
        if "," in use:
            diags.append(
                Diagnostic(
                    "error",
                    f"'use {use}' names more than one template;"
                    " multiple inheritance is not supported",
                    block.file,
                    block.line,
                )
            )
            return None
        if use in visited:
            cycle = " -> ".join(chain + [use])
            diags.append(
                Diagnostic("error", f"template use cycle: {cycle}", block.file, block.line)
            )
            return None
        template = templates.get(use)
        if template is None:
            diags.append(
                Diagnostic(
                    "error",
                    f"'use {use}' references an unknown {cur.kind} template;"
                    " object dropped",
                    block.file,
                    block.line,
                )
            )
            return None
        visited.add(use)
        chain.append(use)
        cur = template


def _require(attrs: dict[str, str], key: str, kind: str) -> str:
    value = attrs.get(key)
    if value is None:
        raise _FieldError(f"registered {kind} is missing required attribute {key!r}")
    return value


def _build_object(
    block: RawObjectBlock,
    attrs: dict[str, str],
    config: ResolvedConfig,
    diags: list[Diagnostic],
) -> None:
    kind = block.kind

    if kind == "service":
        desc = _require(attrs, "service_description", kind)
        host = _require(attrs, "host_name", kind)
        command, args = _parse_command_ref(_require(attrs, "check_command", kind))
        svc = ServiceDef(
            service_description=desc,
            host_name=host,
            check_command=command,
            check_args=args,
            check_period=_require(attrs, "check_period", kind),
            max_check_attempts=_parse_int("max_check_attempts", _require(attrs, "max_check_attempts", kind), 1),
            normal_check_interval=_parse_int("normal_check_interval", attrs.get("normal_check_interval", "1"), 1),
            retry_check_interval=_parse_int("retry_check_interval", attrs.get("retry_check_interval", "1"), 1),
            notification_interval=_parse_int("notification_interval", attrs.get("notification_interval", "0"), 0),
            notification_period=attrs.get("notification_period", "24x7"),
            notification_options=_parse_options(
                "notification_options",
                attrs.get("notification_options", "w,u,c,r"),
                SERVICE_NOTIFY_LETTERS,
            ),
            contact_groups=tuple(sorted(_split_list(attrs.get("contact_groups", "")))),
            is_volatile=_parse_bool("is_volatile", attrs.get("is_volatile", "0")),
            active_checks_enabled=_parse_bool("active_checks_enabled", attrs.get("active_checks_enabled", "1")),
            passive_checks_enabled=_parse_bool("passive_checks_enabled", attrs.get("passive_checks_enabled", "1")),
        )
        if svc.key in config.services:
            diags.append(
                Diagnostic(
                    "error",
                    f"duplicate service {desc!r} on host {host!r}; first definition wins",
                    block.file,
                    block.line,
                )
            )
            return
        config.services[svc.key] = svc

    elif kind == "host":
        name = _require(attrs, "host_name", kind)
        address = attrs.get("address", "").strip()
        if not address:
            raise _FieldError(f"registered host {name!r} has no address")
        parents = tuple(sorted(_split_list(attrs.get("parents", ""))))
        if name in parents:
            diags.append(
                Diagnostic(
                    "error",
                    f"host {name!r} lists itself as a parent; self reference removed",
                    block.file,
                    block.line,
                )
            )
            parents = tuple(p for p in parents if p != name)
        command_ref = attrs.get("check_command", "")
        command, args = _parse_command_ref(command_ref) if command_ref else ("", ())
        host = HostDef(
            host_name=name,
            address=address,
            alias=attrs.get("alias", name),
            parents=parents,
            check_command=command,
            check_args=args,
            check_period=attrs.get("check_period", "24x7"),
            max_check_attempts=_parse_int("max_check_attempts", attrs.get("max_check_attempts", "1"), 1),
            normal_check_interval=_parse_int("normal_check_interval", attrs.get("normal_check_interval", "1"), 1),
            retry_check_interval=_parse_int("retry_check_interval", attrs.get("retry_check_interval", "1"), 1),
            notification_interval=_parse_int("notification_interval", attrs.get("notification_interval", "0"), 0),
            notification_period=attrs.get("notification_period", "24x7"),
            notification_options=_parse_options(
                "notification_options",
                attrs.get("notification_options", "d,u,r"),
                HOST_NOTIFY_LETTERS,
            ),
            contact_groups=tuple(sorted(_split_list(attrs.get("contact_groups", "")))),
            active_checks_enabled=_parse_bool("active_checks_enabled", attrs.get("active_checks_enabled", "1")),
            passive_checks_enabled=_parse_bool("passive_checks_enabled", attrs.get("passive_checks_enabled", "1")),
        )
        if name in config.hosts:
            diags.append(
                Diagnostic(
                    "error",
                    f"duplicate host {name!r}; first definition wins",
                    block.file,
                    block.line,
                )
            )
            return
        config.hosts[name] = host

    elif kind == "hostgroup":
        name = _require(attrs, "hostgroup_name", kind)
        members = tuple(sorted(_split_list(attrs.get("members", ""))))
        if not members:
            diags.append(
                Diagnostic(
                    "error",
                    f"registered hostgroup {name!r} has no members",
                    block.file,
                    block.line,
                )
            )
        group = HostGroupDef(
            hostgroup_name=name,
            alias=attrs.get("alias", name),
            contact_groups=tuple(sorted(_split_list(attrs.get("contact_groups", "")))),
            members=members,
        )
        if name in config.hostgroups:
            diags.append(
                Diagnostic("error", f"duplicate hostgroup {name!r}; first definition wins", block.file, block.line)
            )
            return
        config.hostgroups[name] = group

    elif kind == "contactgroup":
        name = _require(attrs, "contactgroup_name", kind)
        group = ContactGroupDef(
            contactgroup_name=name,
            alias=attrs.get("alias", name),
            channels=_parse_channels(attrs.get("channels", "")),
        )
        if name in config.contactgroups:
            diags.append(
                Diagnostic("error", f"duplicate contactgroup {name!r}; first definition wins", block.file, block.line)
            )
            return
        config.contactgroups[name] = group

    elif kind == "timeperiod":
        name = attrs.get("timeperiod_name") or attrs.get("period_name")
        if name is None:
            raise _FieldError("registered timeperiod is missing required attribute 'timeperiod_name'")
        ranges: dict[int, tuple[tuple[int, int], ...]] = {}
        for idx, weekday in enumerate(WEEKDAY_NAMES):
            if weekday in attrs:
                parsed = _parse_time_ranges(weekday, attrs[weekday])
                if parsed:
                    ranges[idx] = parsed
        period = TimePeriodDef(
            period_name=name,
            alias=attrs.get("alias", name),
            ranges=ranges,
        )
        if name in config.timeperiods:
            diags.append(
                Diagnostic("error", f"duplicate timeperiod {name!r}; first definition wins", block.file, block.line)
            )
            return
        config.timeperiods[name] = period

    elif kind == "command":
        name = _require(attrs, "command_name", kind)
        command = CommandDef(
            command_name=name,
            command_line=_require(attrs, "command_line", kind),
        )
        if name in config.commands:
            diags.append(
                Diagnostic("error", f"duplicate command {name!r}; first definition wins", block.file, block.line)
            )
            return
        config.commands[name] = command
