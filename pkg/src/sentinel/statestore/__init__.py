"""Flat-file status and retention persistence."""

from sentinel.statestore.store import (
    StatusSnapshot,
    read_retention,
    read_status,
    restore_retention,
    write_retention,
    write_status,
)

__all__ = [
    "StatusSnapshot",
    "read_retention",
    "read_status",
    "restore_retention",
    "write_retention",
    "write_status",
]
