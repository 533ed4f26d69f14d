"""Check scheduling: one due-queue loop feeding a bounded worker pool.

The loop owns all schedule entries; checks run on pool threads and their
results are handed to the sink in completion order.  An entry is never
dispatched twice concurrently: it is marked in flight until its result is
delivered, then rescheduled from its finish time (retry interval while the
object sits in a soft problem state, normal interval otherwise).
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable

log = logging.getLogger(__name__)

Target = Hashable
CheckRunner = Callable[[Target], "object"]
ResultSink = Callable[[Target, "object"], None]

DEFAULT_MAX_WORKERS = 32


@dataclass
class ScheduleEntry:
    target: Target
    normal_interval: int
    retry_interval: int
    next_due: float = 0.0
    in_retry: bool = False
    in_flight: bool = field(default=False, repr=False)
    dispatch_count: int = 0


def next_check_time(
    entry: ScheduleEntry, last_finished: float, interval_length: float
) -> float:
    """When the entry should run next, given when its last check finished."""
    interval = entry.retry_interval if entry.in_retry else entry.normal_interval
    due = last_finished + interval * interval_length
    return max(due, last_finished)


class Scheduler:
    """Continuous dispatcher for active checks."""

    def __init__(
        self,
        check_runner: CheckRunner,
        result_sink: ResultSink,
        interval_length: float = 60.0,
        max_workers: int = DEFAULT_MAX_WORKERS,
        clock: Callable[[], float] = time.time,
        stagger: bool = True,
    ) -> None:
        self._run_check = check_runner
        self._sink = result_sink
        self.interval_length = interval_length
        self.max_workers = max_workers
        self.clock = clock
        self.stagger = stagger
        self._entries: dict[Target, ScheduleEntry] = {}
        self._cond = threading.Condition()
        self._pool: ThreadPoolExecutor | None = None
        self._loop_thread: threading.Thread | None = None
        self._stopping = False
        self._in_flight = 0
        self._dispatched_total = 0
        self._completed_total = 0

    def add(self, target: Target, normal_interval: int, retry_interval: int) -> None:
        with self._cond:
            self._entries[target] = ScheduleEntry(
                target=target,
                normal_interval=normal_interval,
                retry_interval=retry_interval,
                next_due=self.clock(),
            )
            self._cond.notify()

    def has(self, target: Target) -> bool:
        with self._cond:
            return target in self._entries

    def start(self) -> None:
        with self._cond:
            if self._loop_thread is not None:
                return
            now = self.clock()
            entries = list(self._entries.values())
            if self.stagger and entries:
                # spread first runs evenly over one normal interval so a
                # restart does not fire every check at once
                for i, entry in enumerate(entries):
                    window = entry.normal_interval * self.interval_length
                    entry.next_due = now + (i / len(entries)) * window
            else:
                for entry in entries:
                    entry.next_due = now
            self._stopping = False
            self._pool = ThreadPoolExecutor(
                max_workers=self.max_workers, thread_name_prefix="check"
            )
            self._loop_thread = threading.Thread(
                target=self._loop, name="check-scheduler", daemon=True
            )
            self._loop_thread.start()

    def stop(self) -> None:
        with self._cond:
            self._stopping = True
            self._cond.notify_all()
        if self._loop_thread is not None:
            self._loop_thread.join(timeout=10)
            self._loop_thread = None
        if self._pool is not None:
            self._pool.shutdown(wait=True, cancel_futures=True)
            self._pool = None

    def force(self, target: Target) -> bool:
        """Pull the target's next check forward to now; False if unknown."""
        with self._cond:
            entry = self._entries.get(target)
            if entry is None:
                return False
            entry.next_due = self.clock()
            self._cond.notify()
            return True

    def set_retry(self, target: Target, in_retry: bool) -> None:
        with self._cond:
            entry = self._entries.get(target)
            if entry is not None and entry.in_retry != in_retry:
                entry.in_retry = in_retry
                # moving between normal and retry cadence takes effect from
                # the last completion, not only after the stale due time
                entry.next_due = min(
                    entry.next_due,
                    self.clock() + entry.retry_interval * self.interval_length,
                )
                self._cond.notify()

    def stats(self) -> dict[str, int]:
        with self._cond:
            return {
                "entries": len(self._entries),
                "in_flight": self._in_flight,
                "queued": max(0, self._in_flight - self.max_workers),
                "saturated": int(self._in_flight > self.max_workers),
                "dispatched_total": self._dispatched_total,
                "completed_total": self._completed_total,
            }

    def dispatch_counts(self) -> dict[Target, int]:
        with self._cond:
            return {t: e.dispatch_count for t, e in self._entries.items()}

    # -- internals ---------------------------------------------------------

    def _loop(self) -> None:
        while True:
            with self._cond:
                if self._stopping:
                    return
                now = self.clock()
                due = [
                    e
                    for e in self._entries.values()
                    if not e.in_flight and e.next_due <= now
                ]
                for entry in due:
                    entry.in_flight = True
                    entry.dispatch_count += 1
                    self._dispatched_total += 1
                    self._in_flight += 1
                pool = self._pool
                if not due:
                    pending = [
                        e.next_due for e in self._entries.values() if not e.in_flight
                    ]
                    wait_for = min(pending) - now if pending else 0.5
                    self._cond.wait(timeout=min(0.5, max(0.001, wait_for)))
                    continue
            for entry in due:
                try:
                    pool.submit(self._execute, entry)
                except RuntimeError:  # pool shut down mid-dispatch
                    with self._cond:
                        entry.in_flight = False
                        self._in_flight -= 1
                    return

    def _execute(self, entry: ScheduleEntry) -> None:
        try:
            result = self._run_check(entry.target)
        except Exception as exc:  # a crashing runner must not wedge the entry
            result = None
            error = exc
        else:
            error = None
        try:
            if result is not None:
                self._sink(entry.target, result)
        finally:
            with self._cond:
                entry.in_flight = False
                entry.next_due = next_check_time(entry, self.clock(), self.interval_length)
                self._in_flight -= 1
                self._completed_total += 1
                self._cond.notify()
        if error is not None:
            log.error("check runner failed for %r: %s", entry.target, error)
