"""Canonical printing of a resolved configuration.

The output parses and re-resolves back to an equal ResolvedConfig: objects are
sorted by identifier, lists are comma-joined in stored (sorted) order, and
notification option sets print in a fixed letter order.
"""

from __future__ import annotations

from sentinel.objconf.model import (
    CommandDef,
    ContactGroupDef,
    HostDef,
    HostGroupDef,
    ResolvedConfig,
    ServiceDef,
    TimePeriodDef,
    WEEKDAY_NAMES,
)

_SERVICE_LETTER_ORDER = "wucr"
_HOST_LETTER_ORDER = "dur"


def _options(letters: frozenset[str], order: str) -> str:
    return ",".join(l for l in order if l in letters)


def _command_ref(command: str, args: tuple[str, ...]) -> str:
    return "!".join((command,) + args)


def _block(kind: str, attrs: list[tuple[str, str]]) -> str:
    width = max(len(k) for k, _ in attrs)
    lines = [f"define {kind}{{"]
    for key, value in attrs:
        lines.append(f"    {key.ljust(width)} {value}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _minutes(m: int) -> str:
    return f"{m // 60:02d}:{m % 60:02d}"


def print_host(host: HostDef) -> str:
    attrs = [
        ("host_name", host.host_name),
        ("alias", host.alias),
        ("address", host.address),
    ]
    if host.parents:
        attrs.append(("parents", ",".join(host.parents)))
    if host.check_command:
        attrs.append(("check_command", _command_ref(host.check_command, host.check_args)))
    attrs += [
        ("check_period", host.check_period),
        ("max_check_attempts", str(host.max_check_attempts)),
        ("normal_check_interval", str(host.normal_check_interval)),
        ("retry_check_interval", str(host.retry_check_interval)),
        ("notification_interval", str(host.notification_interval)),
        ("notification_period", host.notification_period),
        ("notification_options", _options(host.notification_options, _HOST_LETTER_ORDER)),
        ("active_checks_enabled", "1" if host.active_checks_enabled else "0"),
        ("passive_checks_enabled", "1" if host.passive_checks_enabled else "0"),
    ]
    if host.contact_groups:
        attrs.append(("contact_groups", ",".join(host.contact_groups)))
    return _block("host", attrs)


def print_service(svc: ServiceDef) -> str:
    attrs = [
        ("service_description", svc.service_description),
        ("host_name", svc.host_name),
        ("check_command", _command_ref(svc.check_command, svc.check_args)),
        ("check_period", svc.check_period),
        ("max_check_attempts", str(svc.max_check_attempts)),
        ("normal_check_interval", str(svc.normal_check_interval)),
        ("retry_check_interval", str(svc.retry_check_interval)),
        ("notification_interval", str(svc.notification_interval)),
        ("notification_period", svc.notification_period),
        ("notification_options", _options(svc.notification_options, _SERVICE_LETTER_ORDER)),
        ("is_volatile", "1" if svc.is_volatile else "0"),
        ("active_checks_enabled", "1" if svc.active_checks_enabled else "0"),
        ("passive_checks_enabled", "1" if svc.passive_checks_enabled else "0"),
    ]
    if svc.contact_groups:
        attrs.append(("contact_groups", ",".join(svc.contact_groups)))
    return _block("service", attrs)


def print_hostgroup(hg: HostGroupDef) -> str:
    attrs = [("hostgroup_name", hg.hostgroup_name), ("alias", hg.alias)]
    if hg.contact_groups:
        attrs.append(("contact_groups", ",".join(hg.contact_groups)))
    if hg.members:
        attrs.append(("members", ",".join(hg.members)))
    return _block("hostgroup", attrs)


def print_contactgroup(cg: ContactGroupDef) -> str:
    attrs = [("contactgroup_name", cg.contactgroup_name), ("alias", cg.alias)]
    if cg.channels:
        rendered = ",".join(
            f"{cmd}@{period}" if period else cmd for cmd, period in cg.channels
        )
        attrs.append(("channels", rendered))
    return _block("contactgroup", attrs)


def print_timeperiod(tp: TimePeriodDef) -> str:
    attrs = [("timeperiod_name", tp.period_name), ("alias", tp.alias)]
    for idx, weekday in enumerate(WEEKDAY_NAMES):
        if idx in tp.ranges and tp.ranges[idx]:
            rendered = ",".join(f"{_minutes(s)}-{_minutes(e)}" for s, e in tp.ranges[idx])
            attrs.append((weekday, rendered))
    return _block("timeperiod", attrs)


def print_command(cmd: CommandDef) -> str:
    return _block("command", [("command_name", cmd.command_name), ("command_line", cmd.command_line)])


def print_config(config: ResolvedConfig, header: str | None = None) -> str:
    """Render the whole configuration as parseable flat-file text."""
    chunks: list[str] = []
    if header:
        chunks.append("\n".join(f"# {line}" for line in header.splitlines()) + "\n")
    for name in sorted(config.timeperiods):
        chunks.append(print_timeperiod(config.timeperiods[name]))
    for name in sorted(config.commands):
        chunks.append(print_command(config.commands[name]))
    for name in sorted(config.contactgroups):
        chunks.append(print_contactgroup(config.contactgroups[name]))
    for name in sorted(config.hosts):
        chunks.append(print_host(config.hosts[name]))
    for key in sorted(config.services):
        chunks.append(print_service(config.services[key]))
    for name in sorted(config.hostgroups):
        chunks.append(print_hostgroup(config.hostgroups[name]))
    return "\n".join(chunks)
