"""Config generation from an asset inventory.

Every asset becomes a monitored host; its class decides which service checks
it gets.  Network gear and farm machines are only pinged, mail machines get
POP and IMAP banner probes, web machines an HTTP probe, and printers plus
AFS machines are served by external plugins.  The generated text always
parses, resolves and validates cleanly.
"""

from __future__ import annotations

import csv
import io
import re

from sentinel.objconf.model import AssetRecord

_IDENT_RE = re.compile(r"^[A-Za-z0-9._-]+$")

ASSET_CSV_HEADER = ["hostname", "address", "host_class", "contact_group"]

# host_class -> tuple of (service_description, check_command reference)
DEFAULT_POLICY: dict[str, tuple[tuple[str, str], ...]] = {
    "NetworkDevice": (),
    "FarmPC": (),
    "Printer": (("printer", "check_printer"),),
    "WorkgroupServer": (
        ("load", "check_load"),
        ("disk", "check_disk"),
        ("process", "check_procs"),
    ),
    "Mail": (
        ("pop", "check_pop"),
        ("imap", "check_imap"),
    ),
    "WebServer": (("http", "check_http"),),
    "AFSServer": (("afs", "check_afs"),),
}

_COMMAND_CATALOG = {
    "check-host-alive": "sentinel-check ping $HOSTADDRESS$",
    "check_http": "sentinel-check http http://$HOSTADDRESS$/",
    "check_pop": 'sentinel-check tcp $HOSTADDRESS$ 110 --expect "+OK"',
    "check_imap": 'sentinel-check tcp $HOSTADDRESS$ 143 --expect "* OK"',
    "check_load": "/usr/lib/sentinel/plugins/check_load -H $HOSTADDRESS$",
    "check_disk": "/usr/lib/sentinel/plugins/check_disk -H $HOSTADDRESS$",
    "check_procs": "/usr/lib/sentinel/plugins/check_procs -H $HOSTADDRESS$",
    "check_printer": "/usr/lib/sentinel/plugins/check_printer -H $HOSTADDRESS$",
    "check_afs": "/usr/lib/sentinel/plugins/check_afs -H $HOSTADDRESS$",
    # dispatch shell-quotes each placeholder value, so no quoting here
    "notify-by-email": (
        "/usr/lib/sentinel/channels/send-email"
        " $NOTIFICATIONTYPE$ $HOSTALIAS$ $SERVICEDESC$ $SERVICESTATE$ $OUTPUT$"
    ),
}


class GenerationError(Exception):
    """Raised when the asset inventory cannot be turned into valid config."""


def read_asset_csv(source: str) -> list[AssetRecord]:
    """Read assets from a CSV file path.

    The file must start with the header ``hostname,address,host_class,contact_group``.
    """
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return parse_asset_csv(fh.read())


def parse_asset_csv(text: str) -> list[AssetRecord]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        return []
    header = [cell.strip() for cell in rows[0]]
    if header != ASSET_CSV_HEADER:
        raise GenerationError(
            f"bad asset CSV header {header!r}, expected {ASSET_CSV_HEADER!r}"
        )
    assets = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise GenerationError(f"asset CSV line {lineno}: expected 4 fields, got {len(row)}")
        hostname, address, host_class, contact = (cell.strip() for cell in row)
        if not hostname or not address:
            raise GenerationError(f"asset CSV line {lineno}: hostname and address are required")
        assets.append(AssetRecord(hostname, address, host_class, contact))
    return assets


def generate_from_assets(
    assets: list[AssetRecord],
    policy: dict[str, tuple[tuple[str, str], ...]] | None = None,
) -> str:
    """Render config text for the given inventory.

    Output is deterministic (hosts sorted by name) and self contained: it
    includes the referenced period, command and contact group definitions.
    """
    if policy is None:
        policy = DEFAULT_POLICY

    seen: dict[str, AssetRecord] = {}
    duplicates: list[str] = []
    for asset in assets:
        if not _IDENT_RE.match(asset.hostname):
            raise GenerationError(f"unusable hostname {asset.hostname!r}")
        if not _IDENT_RE.match(asset.owner_contact_group):
            raise GenerationError(f"unusable contact group {asset.owner_contact_group!r}")
        if not asset.address or any(c in asset.address for c in " \t,"):
            raise GenerationError(f"unusable address {asset.address!r} for {asset.hostname}")
        if asset.hostname in seen:
            duplicates.append(asset.hostname)
        seen[asset.hostname] = asset
    if duplicates:
        raise GenerationError(f"duplicate hostnames in assets: {sorted(set(duplicates))}")

    unknown = sorted({a.host_class for a in assets if a.host_class not in policy})
    if unknown:
        raise GenerationError(f"unknown host classes: {unknown}")

    out = io.StringIO()
    out.write("# generated by sentinel-conf from asset inventory\n")
    out.write(f"# {len(assets)} hosts\n")
    if not assets:
        return out.getvalue()

    out.write(_timeperiod_24x7())
    out.write("\n")

    used_commands = {"check-host-alive", "notify-by-email"}
    for asset in assets:
        for _, command in policy[asset.host_class]:
            used_commands.add(command)
    for name in sorted(used_commands):
        line = _COMMAND_CATALOG.get(name)
        if line is None:
            raise GenerationError(f"policy references command {name!r} with no known command line")
        out.write(f"define command{{\n    command_name {name}\n    command_line {line}\n}}\n\n")

    for group in sorted({a.owner_contact_group for a in assets}):
        out.write(
            "define contactgroup{\n"
            f"    contactgroup_name {group}\n"
            f"    alias             {group}\n"
            "    channels          notify-by-email\n"
            "}\n\n"
        )

    out.write(
        "define host{\n"
        "    name                  generated-host\n"
        "    check_command         check-host-alive\n"
        "    check_period          24x7\n"
        "    max_check_attempts    3\n"
        "    normal_check_interval 5\n"
        "    retry_check_interval  1\n"
        "    notification_interval 0\n"
        "    notification_period   24x7\n"
        "    notification_options  d,u,r\n"
        "    register              0\n"
        "}\n\n"
    )
    out.write(
        "define service{\n"
        "    name                  generated-service\n"
        "    check_period          24x7\n"
        "    max_check_attempts    3\n"
        "    normal_check_interval 1\n"
        "    retry_check_interval  1\n"
        "    notification_interval 0\n"
        "    notification_period   24x7\n"
        "    notification_options  w,u,c,r\n"
        "    register              0\n"
        "}\n\n"
    )

    for hostname in sorted(seen):
        asset = seen[hostname]
        out.write(
            "define host{\n"
            f"    host_name      {asset.hostname}\n"
            f"    alias          {asset.hostname}\n"
            f"    address        {asset.address}\n"
            f"    contact_groups {asset.owner_contact_group}\n"
            "    use            generated-host\n"
            "}\n\n"
        )
        for description, command in policy[asset.host_class]:
            out.write(
                "define service{\n"
                f"    service_description {description}\n"
                f"    host_name           {asset.hostname}\n"
                f"    check_command       {command}\n"
                f"    contact_groups      {asset.owner_contact_group}\n"
                "    use                 generated-service\n"
                "}\n\n"
            )
    return out.getvalue()


def _timeperiod_24x7() -> str:
    return (
        "define timeperiod{\n"
        "    timeperiod_name 24x7\n"
        "    alias           24 hours a day, 7 days a week\n"
        "    monday          00:00-24:00\n"
        "    tuesday         00:00-24:00\n"
        "    wednesday       00:00-24:00\n"
        "    thursday        00:00-24:00\n"
        "    friday          00:00-24:00\n"
        "    saturday        00:00-24:00\n"
        "    sunday          00:00-24:00\n"
        "}\n\n"
    )
