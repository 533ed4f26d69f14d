"""Active check execution: plugin protocol, network probes, cluster
aggregation and the check scheduler."""

from sentinel.checkcore.plugin import (
    CheckOrigin,
    CheckResult,
    CheckStatus,
    execute_plugin,
)
from sentinel.checkcore.probes import check_http, check_ping, check_tcp
from sentinel.checkcore.cluster import check_cluster
from sentinel.checkcore.scheduler import ScheduleEntry, Scheduler, next_check_time

__all__ = [
    "CheckOrigin",
    "CheckResult",
    "CheckStatus",
    "ScheduleEntry",
    "Scheduler",
    "check_cluster",
    "check_http",
    "check_ping",
    "check_tcp",
    "execute_plugin",
    "next_check_time",
]
