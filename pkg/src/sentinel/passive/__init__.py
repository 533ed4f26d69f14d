"""Passive result transport: wire codec, TCP gateway and log watcher."""

from sentinel.passive.wire import (
    PassiveResultLine,
    ResultKind,
    WireError,
    decode_line,
    encode_line,
)
from sentinel.passive.gateway import Gateway, GatewayClient
from sentinel.passive.logwatch import LogRule, LogWatcher, match_line, parse_rules

__all__ = [
    "Gateway",
    "GatewayClient",
    "LogRule",
    "LogWatcher",
    "PassiveResultLine",
    "ResultKind",
    "WireError",
    "decode_line",
    "encode_line",
    "match_line",
    "parse_rules",
]
