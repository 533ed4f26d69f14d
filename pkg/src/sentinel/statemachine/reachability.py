"""Parent-topology classification of failing hosts: DOWN vs UNREACHABLE.

A failing host with at least one UP parent (or no parents at all) is itself
at fault: DOWN.  When every path towards the monitoring engine is severed,
the host is merely UNREACHABLE, which keeps one router outage from paging
for the whole subtree behind it.
"""

from __future__ import annotations

import logging

from sentinel.statemachine.state import HostStatus

log = logging.getLogger(__name__)


def host_reachability(
    host_check_status: dict[str, bool],
    parents: dict[str, tuple[str, ...]],
) -> dict[str, HostStatus]:
    """Classify every host given check outcomes and the parent graph.

    ``host_check_status`` maps host -> True (check passed) / False (failed);
    ``parents`` maps host -> its parent hosts (acyclic).  Hosts that name
    unknown parents are treated as parentless, with a log entry, since
    validation should have rejected the config.
    """
    known = set(host_check_status)
    effective_parents: dict[str, tuple[str, ...]] = {}
    for host in host_check_status:
        declared = parents.get(host, ())
        kept = tuple(p for p in declared if p in known)
        if len(kept) != len(declared):
            unknown = [p for p in declared if p not in known]
            log.warning("host %s references unknown parents %s; ignoring them", host, unknown)
        effective_parents[host] = kept

    status: dict[str, HostStatus] = {}

    def classify(host: str, trail: frozenset[str]) -> HostStatus:
        cached = status.get(host)
        if cached is not None:
            return cached
        if host_check_status[host]:
            result = HostStatus.UP
        else:
            ups = effective_parents[host]
            if not ups:
                result = HostStatus.DOWN
            elif host in trail:
                # defensive: a cycle (invalid config) cannot prove
                # unreachability, treat as DOWN
                result = HostStatus.DOWN
            else:
                parent_statuses = [
                    classify(p, trail | {host}) for p in ups
                ]
                if any(s is HostStatus.UP for s in parent_statuses):
                    result = HostStatus.DOWN
                else:
                    result = HostStatus.UNREACHABLE
        status[host] = result
        return result

    for host in host_check_status:
        classify(host, frozenset())
    return status
