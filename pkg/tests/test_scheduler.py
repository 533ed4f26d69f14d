"""Scheduler dispatch behavior with instant stub checks."""

import threading
import time

from sentinel.checkcore import CheckResult, CheckStatus, ScheduleEntry, Scheduler, next_check_time


def instant_check(target):
    return CheckResult(CheckStatus.OK, f"ok {target}")


class Collector:
    def __init__(self):
        self.results = []
        self.lock = threading.Lock()

    def __call__(self, target, result):
        with self.lock:
            self.results.append((target, result, time.time()))

    def count(self, target):
        with self.lock:
            return len([1 for t, _, _ in self.results if t == target])


def test_normal_interval_scheduling():
    entry = ScheduleEntry(target="t", normal_interval=1, retry_interval=5)
    assert next_check_time(entry, 36000.0, 60.0) == 36060.0


def test_retry_interval_scheduling():
    entry = ScheduleEntry(target="t", normal_interval=1, retry_interval=5, in_retry=True)
    assert next_check_time(entry, 36000.0, 60.0) == 36300.0


def test_second_granularity_interval():
    entry = ScheduleEntry(target="t", normal_interval=1, retry_interval=5)
    assert next_check_time(entry, 100.0, 1.0) == 101.0


def test_three_services_checked_five_times_in_six_seconds():
    sink = Collector()
    scheduler = Scheduler(instant_check, sink, interval_length=1.0, max_workers=4)
    for name in ("s1", "s2", "s3"):
        scheduler.add(name, normal_interval=1, retry_interval=1)
    scheduler.start()
    try:
        time.sleep(6.0)
    finally:
        scheduler.stop()
    for name in ("s1", "s2", "s3"):
        assert sink.count(name) >= 5, sink.count(name)


def test_inactive_targets_never_added_never_dispatched():
    # callers only add() actively checked objects; an un-added target
    # cannot be forced or dispatched
    sink = Collector()
    scheduler = Scheduler(instant_check, sink, interval_length=1.0)
    scheduler.add("active", 1, 1)
    assert scheduler.force("passive-only") is False
    scheduler.start()
    try:
        time.sleep(1.5)
    finally:
        scheduler.stop()
    assert sink.count("passive-only") == 0
    assert sink.count("active") >= 1


def test_force_check_runs_promptly():
    sink = Collector()
    scheduler = Scheduler(instant_check, sink, interval_length=3600.0, stagger=False)
    scheduler.add("slow", normal_interval=1, retry_interval=1)
    scheduler.start()
    try:
        deadline = time.time() + 5
        while sink.count("slow") < 1 and time.time() < deadline:
            time.sleep(0.05)
        assert sink.count("slow") == 1  # initial run, next due in an hour
        assert scheduler.force("slow") is True
        deadline = time.time() + 5
        while sink.count("slow") < 2 and time.time() < deadline:
            time.sleep(0.05)
        assert sink.count("slow") >= 2
    finally:
        scheduler.stop()


def test_retry_cadence_switches():
    sink = Collector()
    scheduler = Scheduler(instant_check, sink, interval_length=1.0, stagger=False)
    scheduler.add("svc", normal_interval=30, retry_interval=1)
    scheduler.start()
    try:
        time.sleep(0.5)
        first = sink.count("svc")
        assert first >= 1
        scheduler.set_retry("svc", True)
        time.sleep(3.0)
        assert sink.count("svc") >= first + 2  # now on the 1s retry cadence
    finally:
        scheduler.stop()


def test_no_concurrent_dispatch_of_same_entry():
    running = {"n": 0, "max": 0}
    lock = threading.Lock()

    def slow_check(target):
        with lock:
            running["n"] += 1
            running["max"] = max(running["max"], running["n"])
        time.sleep(0.3)
        with lock:
            running["n"] -= 1
        return CheckResult(CheckStatus.OK, "ok")

    scheduler = Scheduler(slow_check, Collector(), interval_length=0.01, stagger=False)
    scheduler.add("one", 1, 1)
    scheduler.start()
    try:
        time.sleep(1.2)
    finally:
        scheduler.stop()
    assert running["max"] == 1


def test_saturation_counts_and_no_loss():
    sink = Collector()

    def slowish(target):
        time.sleep(0.2)
        return CheckResult(CheckStatus.OK, "ok")

    scheduler = Scheduler(slowish, sink, interval_length=3600.0, max_workers=2, stagger=False)
    for i in range(8):
        scheduler.add(f"t{i}", 1, 1)
    scheduler.start()
    try:
        time.sleep(0.15)
        stats = scheduler.stats()
        assert stats["in_flight"] > stats["entries"] - 8 + 2 or stats["in_flight"] >= 2
        deadline = time.time() + 5
        while scheduler.stats()["completed_total"] < 8 and time.time() < deadline:
            time.sleep(0.05)
    finally:
        scheduler.stop()
    # every entry got exactly one initial dispatch: none dropped, none doubled
    assert sorted(t for t, _, _ in sink.results) == sorted(f"t{i}" for i in range(8))
