"""Cluster aggregation: how many members may fail before it is an alarm."""

from __future__ import annotations

from sentinel.checkcore.plugin import CheckResult, CheckStatus


def check_cluster(
    member_states: list[CheckStatus],
    warn_threshold: int,
    crit_threshold: int,
) -> CheckResult:
    """Count non-OK members against the warning / critical thresholds.

    A member counts as failed whenever it is not OK (WARNING, CRITICAL and
    UNKNOWN all count: fail-safe).  An empty cluster is UNKNOWN because it
    proves nothing either way.
    """
    if warn_threshold < 1 or crit_threshold < warn_threshold:
        raise ValueError(
            f"thresholds must satisfy 1 <= warn <= crit, got warn={warn_threshold} crit={crit_threshold}"
        )
    if not member_states:
        return CheckResult(CheckStatus.UNKNOWN, "cluster has no members", source="cluster")

    failed = sum(1 for state in member_states if state != CheckStatus.OK)
    total = len(member_states)
    output = f"cluster: {failed}/{total} members failed"
    if failed >= crit_threshold:
        status = CheckStatus.CRITICAL
    elif failed >= warn_threshold:
        status = CheckStatus.WARNING
    else:
        status = CheckStatus.OK
    return CheckResult(status, output, source="cluster")
