"""Cross-reference and structural validation of a resolved configuration."""

from __future__ import annotations

from sentinel.objconf.model import Diagnostic, ResolvedConfig


def validate(config: ResolvedConfig) -> list[Diagnostic]:
    """Return one diagnostic per violated reference or structural rule.

    An empty list means the configuration is deployable.
    """
    diags: list[Diagnostic] = []

    def err(message: str) -> None:
        diags.append(Diagnostic("error", message))

    for host in config.hosts.values():
        for parent in host.parents:
            if parent not in config.hosts:
                err(f"host {host.host_name!r}: unknown parent {parent!r}")
        if host.check_command and host.check_command not in config.commands:
            err(f"host {host.host_name!r}: unknown command {host.check_command!r}")
        for period in (host.check_period, host.notification_period):
            if period not in config.timeperiods:
                err(f"host {host.host_name!r}: unknown period {period!r}")
        for group in host.contact_groups:
            if group not in config.contactgroups:
                err(f"host {host.host_name!r}: unknown contact group {group!r}")

    for svc in config.services.values():
        label = f"service {svc.service_description!r} on {svc.host_name!r}"
        if svc.host_name not in config.hosts:
            err(f"{label}: unknown host {svc.host_name!r}")
        if svc.check_command not in config.commands:
            err(f"{label}: unknown command {svc.check_command!r}")
        for period in (svc.check_period, svc.notification_period):
            if period not in config.timeperiods:
                err(f"{label}: unknown period {period!r}")
        for group in svc.contact_groups:
            if group not in config.contactgroups:
                err(f"{label}: unknown contact group {group!r}")

    for hg in config.hostgroups.values():
        for member in hg.members:
            if member not in config.hosts:
                err(f"hostgroup {hg.hostgroup_name!r}: unknown member {member!r}")
        for group in hg.contact_groups:
            if group not in config.contactgroups:
                err(f"hostgroup {hg.hostgroup_name!r}: unknown contact group {group!r}")

    for cg in config.contactgroups.values():
        for command, period in cg.channels:
            if command not in config.commands:
                err(f"contactgroup {cg.contactgroup_name!r}: unknown channel command {command!r}")
            if period is not None and period not in config.timeperiods:
                err(f"contactgroup {cg.contactgroup_name!r}: unknown channel period {period!r}")

    diags.extend(_check_parent_cycles(config))
    return diags


def _check_parent_cycles(config: ResolvedConfig) -> list[Diagnostic]:
    """Detect cycles in the host parents relation via iterative DFS."""
    diags: list[Diagnostic] = []
    WHITE, GREY, BLACK = 0, 1, 2
    color = {name: WHITE for name in config.hosts}

    for start in config.hosts:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, list[str]]] = [(start, [start])]
        while stack:
            node, path = stack.pop()
            if color.get(node, BLACK) == BLACK:
                continue
            if color[node] == GREY:
                color[node] = BLACK
                continue
            color[node] = GREY
            stack.append((node, path))  # revisit to blacken after children
            for parent in config.hosts[node].parents:
                if parent not in config.hosts:
                    continue
                if color[parent] == GREY:
                    cycle = path[path.index(parent):] if parent in path else path
                    diags.append(
                        Diagnostic(
                            "error",
                            "host parents cycle: " + " -> ".join(cycle + [parent]),
                        )
                    )
                elif color[parent] == WHITE:
                    stack.append((parent, path + [parent]))
    return diags
