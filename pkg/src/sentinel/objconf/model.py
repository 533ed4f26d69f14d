"""Typed object definitions and the resolved configuration container."""

from __future__ import annotations

from dataclasses import dataclass, field


KNOWN_KINDS = frozenset(
    {"host", "service", "hostgroup", "contactgroup", "timeperiod", "command"}
)

SERVICE_NOTIFY_LETTERS = frozenset({"w", "u", "c", "r"})
HOST_NOTIFY_LETTERS = frozenset({"d", "u", "r"})

WEEKDAY_NAMES = (
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
)


@dataclass
class Diagnostic:
    """One problem found while parsing, resolving or validating config."""

    severity: str  # "error" or "warning"
    message: str
    file: str | None = None
    line: int | None = None

    def __str__(self) -> str:
        origin = self.file or "<input>"
        if self.line:
            origin = f"{origin}:{self.line}"
        return f"{origin}: {self.severity}: {self.message}"


@dataclass
class RawObjectBlock:
    """One `define <kind>{ ... }` block as it appeared in a config file.

    Attribute keys are unique after parsing; a duplicate key inside one block
    is reported as a diagnostic and the last occurrence wins.
    """

    kind: str
    attributes: list[tuple[str, str]]
    file: str | None = None
    line: int | None = None

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.attributes:
            if k == key:
                return v
        return default

    @property
    def attr_map(self) -> dict[str, str]:
        return dict(self.attributes)


@dataclass
class ServiceDef:
    service_description: str
    host_name: str
    check_command: str
    check_args: tuple[str, ...] = ()
    check_period: str = "24x7"
    max_check_attempts: int = 1
    normal_check_interval: int = 1
    retry_check_interval: int = 1
    notification_interval: int = 0
    notification_period: str = "24x7"
    notification_options: frozenset[str] = SERVICE_NOTIFY_LETTERS
    contact_groups: tuple[str, ...] = ()
    is_volatile: bool = False
    active_checks_enabled: bool = True
    passive_checks_enabled: bool = True

    @property
    def key(self) -> tuple[str, str]:
        return (self.host_name, self.service_description)


@dataclass
class HostDef:
    host_name: str
    address: str
    alias: str = ""
    parents: tuple[str, ...] = ()
    check_command: str = ""
    check_args: tuple[str, ...] = ()
    check_period: str = "24x7"
    max_check_attempts: int = 1
    normal_check_interval: int = 1
    retry_check_interval: int = 1
    notification_interval: int = 0
    notification_period: str = "24x7"
    notification_options: frozenset[str] = HOST_NOTIFY_LETTERS
    contact_groups: tuple[str, ...] = ()
    active_checks_enabled: bool = True
    passive_checks_enabled: bool = True


@dataclass
class HostGroupDef:
    hostgroup_name: str
    alias: str = ""
    contact_groups: tuple[str, ...] = ()
    members: tuple[str, ...] = ()


@dataclass
class TimePeriodDef:
    """Weekly schedule: per-weekday lists of [start, end) minute-of-day ranges.

    Weekdays index 0..6 = Monday..Sunday; 0 <= start < end <= 1440 and ranges
    within one weekday are sorted and non-overlapping.
    """

    period_name: str
    alias: str = ""
    ranges: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)


@dataclass
class ContactGroupDef:
    """A notification recipient group.

    Each channel is a (command identifier, optional period override) pair;
    the override replaces the object's notification_period for that channel,
    which is how per-staff alarm calendars are expressed.
    """

    contactgroup_name: str
    alias: str = ""
    channels: tuple[tuple[str, str | None], ...] = ()


@dataclass
class CommandDef:
    command_name: str
    command_line: str


@dataclass
class ResolvedConfig:
    """Fully template-resolved runtime configuration.

    Contains no unregistered templates; reference integrity is checked by
    ``validate`` which returns one diagnostic per violation.
    """

    hosts: dict[str, HostDef] = field(default_factory=dict)
    services: dict[tuple[str, str], ServiceDef] = field(default_factory=dict)
    hostgroups: dict[str, HostGroupDef] = field(default_factory=dict)
    contactgroups: dict[str, ContactGroupDef] = field(default_factory=dict)
    timeperiods: dict[str, TimePeriodDef] = field(default_factory=dict)
    commands: dict[str, CommandDef] = field(default_factory=dict)

    def services_on(self, host_name: str) -> list[ServiceDef]:
        return [s for s in self.services.values() if s.host_name == host_name]

    def host_contact_groups(self, host_name: str) -> tuple[str, ...]:
        """Effective contact groups for a host: its own when set, otherwise
        the union of groups from hostgroups it belongs to."""
        host = self.hosts.get(host_name)
        if host is None:
            return ()
        if host.contact_groups:
            return host.contact_groups
        groups: set[str] = set()
        for hg in self.hostgroups.values():
            if host_name in hg.members:
                groups.update(hg.contact_groups)
        return tuple(sorted(groups))


def builtin_24x7() -> TimePeriodDef:
    """The canonical always-on period, predefined for configs that use it
    without declaring it."""
    return TimePeriodDef(
        period_name="24x7",
        alias="24 hours a day, 7 days a week",
        ranges={day: ((0, 1440),) for day in range(7)},
    )


@dataclass
class AssetRecord:
    """One row of the asset inventory used for config generation."""

    hostname: str
    address: str
    host_class: str
    owner_contact_group: str
