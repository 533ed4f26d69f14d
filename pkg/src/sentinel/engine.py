"""The central engine: checks in, state transitions, notifications out.

``EngineCore`` holds the pure logic and is strictly single-threaded: every
mutation flows through its ``process_*`` methods with an explicit ``now``,
which makes event ordering deterministic and lets tests simulate timelines.
``Engine`` wraps the core with the runtime plumbing: the scheduler and its
worker pool, the passive gateway, the single state thread consuming the
ordered hand-off queue, periodic status/retention writes, and snapshot
publication for the HTTP API.
"""

from __future__ import annotations

import logging
import os
import queue
import re
import shlex
import threading
import time
from dataclasses import replace
from datetime import datetime
from typing import Callable
from zoneinfo import ZoneInfo

from sentinel.checkcore.plugin import CheckOrigin, CheckResult, CheckStatus, execute_plugin
from sentinel.checkcore.scheduler import Scheduler
from sentinel.notify.dispatch import DispatchRecord, dispatch
from sentinel.notify.policy import NotificationPolicy, should_notify
from sentinel.notify.render import NotificationMessage, render_message
from sentinel.objconf.model import HostDef, ResolvedConfig, ServiceDef
from sentinel.passive.gateway import Gateway
from sentinel.passive.wire import PassiveResultLine, ResultKind
from sentinel.settings import EngineSettings, parse_listen, read_token_file
from sentinel.statemachine.reachability import host_reachability
from sentinel.statemachine.state import (
    AckError,
    DowntimeError,
    EventKind,
    HostStatus,
    MonitorState,
    StateEvent,
    StateType,
    acknowledge,
    add_downtime,
    apply_result,
    in_downtime,
    is_ok_status,
)
from sentinel.statestore import (
    StatusSnapshot,
    read_retention,
    restore_retention,
    write_retention,
    write_status,
)

log = logging.getLogger(__name__)

Target = tuple
_MACRO_RE = re.compile(r"\$([A-Z0-9]+)\$")


class UnknownTargetError(KeyError):
    pass


class TargetStateError(Exception):
    """Operation conflicts with the target's current state or config."""


class Notifier:
    """Evaluate notification gates per contact-group channel and dispatch."""

    def __init__(
        self,
        config: ResolvedConfig,
        settings: EngineSettings,
        dispatch_runner: Callable[..., DispatchRecord] | None = None,
        dispatch_sink: Callable[[str], None] | None = None,
    ) -> None:
        self.config = config
        self.settings = settings
        self.tz = ZoneInfo(settings.timezone) if settings.timezone else None
        self._runner = dispatch_runner
        self._dispatch_sink = dispatch_sink

    def deliver(
        self,
        event: StateEvent,
        definition: ServiceDef | HostDef,
        state: MonitorState,
        groups: tuple[str, ...],
        now: float,
    ) -> list[DispatchRecord]:
        """Run every channel of every contact group through the gates."""
        policy = NotificationPolicy(
            options=definition.notification_options,
            notification_interval=definition.notification_interval,
            notification_period=definition.notification_period,
            contact_groups=groups,
        )
        records: list[DispatchRecord] = []
        for group_name in groups:
            group = self.config.contactgroups.get(group_name)
            if group is None:
                log.warning("event for unknown contact group %r dropped", group_name)
                continue
            for command_name, period_override in group.channels:
                ok, reason = should_notify(
                    event,
                    policy,
                    state,
                    self.config.timeperiods,
                    now,
                    interval_length=self.settings.interval_length,
                    tz=self.tz,
                    period_override=period_override,
                )
                if not ok:
                    log.debug("notification to %s/%s suppressed: %s", group_name, command_name, reason)
                    continue
                command = self.config.commands.get(command_name)
                if command is None:
                    log.warning("channel command %r not defined; skipped", command_name)
                    continue
                message = self._build_message(event)
                rendered = render_message(
                    message, self.settings.engine_name, self.settings.engine_version, self.tz
                )
                if self._runner is not None:
                    record = self._runner(
                        message, command.command_line, rendered, group_name, now
                    )
                else:
                    record = dispatch(
                        message, command.command_line, rendered, group_name, tz=self.tz
                    )
                records.append(record)
                if self._dispatch_sink is not None:
                    stamp = datetime.fromtimestamp(now, self.tz).isoformat()
                    status = "sent" if record.ok else "failed"
                    self._dispatch_sink(f"{stamp} {group_name} {command_name} {status}")
        return records

    def _build_message(self, event: StateEvent) -> NotificationMessage:
        kind = "RECOVERY" if event.kind is EventKind.RECOVERY else "PROBLEM"
        host_name = event.target[1]
        host = self.config.hosts.get(host_name)
        service = event.target[2] if event.target[0] == "service" else None
        return NotificationMessage(
            notification_type=kind,
            service_description=service,
            host_alias=host.alias if host else host_name,
            address=host.address if host else "",
            state=event.status.name,
            at=event.at,
            additional_info=event.output,
        )


class EngineCore:
    """Deterministic state pump; one logical writer, explicit clock."""

    def __init__(
        self,
        config: ResolvedConfig,
        settings: EngineSettings,
        notifier: Notifier | None = None,
        audit_sink: Callable[[str], None] | None = None,
    ) -> None:
        self.config = config
        self.settings = settings
        self.notifier = notifier or Notifier(config, settings)
        self.audit_sink = audit_sink
        self.request_host_check: Callable[[str], None] | None = None
        self.states: dict[Target, MonitorState] = {}
        for name in config.hosts:
            self.states[("host", name)] = MonitorState.fresh_host()
        for host, desc in config.services:
            self.states[("service", host, desc)] = MonitorState.fresh_service()
        self.counters = {
            "results_applied": 0,
            "active_results": 0,
            "passive_received": 0,
            "passive_applied": 0,
            "passive_dropped_unknown": 0,
            "passive_rejected": 0,
            "clock_skew_substituted": 0,
            "notifications_sent": 0,
            "retention_dropped": 0,
        }

    # -- lifecycle -------------------------------------------------------

    def restore(self, retained: dict[Target, MonitorState]) -> int:
        kept, dropped = restore_retention(retained, set(self.states))
        self.states.update(kept)
        self.counters["retention_dropped"] += dropped
        return dropped

    def snapshot(self, now: float) -> StatusSnapshot:
        snap = StatusSnapshot(generated_at=now)
        for target, state in self.states.items():
            if target[0] == "host":
                snap.hosts[target[1]] = state
            else:
                snap.services[(target[1], target[2])] = state
        return snap

    # -- result processing -------------------------------------------------

    def process_result(self, target: Target, result: CheckResult, now: float) -> list[StateEvent]:
        state = self.states.get(target)
        if state is None:
            self._audit_line(now, target, "DROPPED", "-", 0, f"result for unknown object: {result.output}")
            self.counters["passive_dropped_unknown"] += 1
            return []
        if result.origin is CheckOrigin.ACTIVE:
            self.counters["active_results"] += 1

        if target[0] == "host":
            events = self._apply_host_result(target, state, result, now)
        else:
            events = self._apply_service_result(target, state, result, now)
        self.counters["results_applied"] += 1
        return events

    def _apply_host_result(
        self, target: Target, state: MonitorState, result: CheckResult, now: float
    ) -> list[StateEvent]:
        definition = self.config.hosts[target[1]]
        check_ok = result.status is CheckStatus.OK
        effective = self._effective_host_status(target[1], check_ok)
        new_state, events = apply_result(
            state,
            definition.max_check_attempts,
            result,
            now,
            target=target,
            status=effective,
            passive_checks_enabled=definition.passive_checks_enabled,
        )
        self.states[target] = new_state
        hard_changed = (
            new_state.state_type is StateType.HARD
            and (state.current_status != new_state.current_status or state.state_type != new_state.state_type)
        )
        self._emit(events, definition, target, now)
        if hard_changed:
            self._reclassify_hosts(now)
        return events

    def _apply_service_result(
        self, target: Target, state: MonitorState, result: CheckResult, now: float
    ) -> list[StateEvent]:
        definition = self.config.services[(target[1], target[2])]
        host_state = self.states.get(("host", target[1]))
        host_unreachable = (
            host_state is not None and host_state.current_status is HostStatus.UNREACHABLE
        )
        was_ok = is_ok_status(state.current_status)
        new_state, events = apply_result(
            state,
            definition.max_check_attempts,
            result,
            now,
            target=target,
            is_volatile=definition.is_volatile,
            passive_checks_enabled=definition.passive_checks_enabled,
            host_unreachable=host_unreachable,
        )
        self.states[target] = new_state
        # a service just went bad: classify its host right away so DOWN vs
        # UNREACHABLE is known while the incident unfolds
        if was_ok and not is_ok_status(new_state.current_status) and self.request_host_check:
            if ("host", target[1]) in self.states:
                self.request_host_check(target[1])
        self._emit(events, definition, target, now)
        return events

    def process_passive(self, record: PassiveResultLine, now: float) -> list[StateEvent]:
        self.counters["passive_received"] += 1
        stamp = float(record.received_at)
        if abs(now - stamp) > self.settings.clock_skew_seconds:
            self._audit_line(
                now,
                ("host", record.host),
                "SKEW",
                "-",
                0,
                f"producer stamp {record.received_at} outside skew window; using local time",
            )
            self.counters["clock_skew_substituted"] += 1
            stamp = now
        if record.kind is ResultKind.SERVICE:
            target: Target = ("service", record.host, record.service)
            status = CheckStatus(record.code)
        else:
            target = ("host", record.host)
            status = CheckStatus.OK if record.code == 0 else CheckStatus.CRITICAL
        result = CheckResult(
            status,
            record.output,
            started_at=stamp,
            finished_at=stamp,
            origin=CheckOrigin.PASSIVE,
            source="gateway",
        )
        events = self.process_result(target, result, now)
        if any(e.kind is EventKind.STATE_LOG and "rejected" in e.output for e in events):
            self.counters["passive_rejected"] += 1
        elif events:
            self.counters["passive_applied"] += 1
        return events

    # -- operator commands ---------------------------------------------------

    def process_ack(self, target: Target, who: str, comment: str, now: float) -> None:
        state = self._state_of(target)
        new_state = acknowledge(state, who, _oneline(comment), now)
        self.states[target] = new_state
        self._audit_line(now, target, "ACK", new_state.current_status.name, new_state.attempt, f"{who}: {comment}")

    def process_downtime(self, target: Target, start: float, end: float, now: float) -> None:
        state = self._state_of(target)
        self.states[target] = add_downtime(state, start, end)
        self._audit_line(now, target, "DOWNTIME", state.current_status.name, state.attempt, f"[{start}, {end})")

    def _state_of(self, target: Target) -> MonitorState:
        state = self.states.get(target)
        if state is None:
            raise UnknownTargetError(target)
        return state

    # -- reachability ------------------------------------------------------

    def _host_check_map(self, override: tuple[str, bool] | None = None) -> dict[str, bool]:
        check = {}
        for name in self.config.hosts:
            state = self.states[("host", name)]
            check[name] = state.current_status is HostStatus.UP
        if override is not None:
            check[override[0]] = override[1]
        return check

    def _parents_map(self) -> dict[str, tuple[str, ...]]:
        return {name: h.parents for name, h in self.config.hosts.items() if h.parents}

    def _effective_host_status(self, host: str, check_ok: bool) -> HostStatus:
        if check_ok:
            return HostStatus.UP
        classified = host_reachability(self._host_check_map((host, False)), self._parents_map())
        return classified[host]

    def _reclassify_hosts(self, now: float) -> None:
        """Silently flip DOWN <-> UNREACHABLE where the topology says so."""
        classified = host_reachability(self._host_check_map(), self._parents_map())
        for name, effective in classified.items():
            target = ("host", name)
            state = self.states[target]
            if state.current_status in (HostStatus.DOWN, HostStatus.UNREACHABLE):
                if state.current_status is not effective:
                    self.states[target] = replace(state, current_status=effective)
                    self._audit_line(
                        now, target, "RECLASSIFY", effective.name, state.attempt,
                        f"{state.current_status.name} -> {effective.name} by reachability",
                    )

    # -- notification ------------------------------------------------------

    def _emit(
        self,
        events: list[StateEvent],
        definition: ServiceDef | HostDef,
        target: Target,
        now: float,
    ) -> None:
        for event in events:
            self._audit_event(event)
            if event.kind is EventKind.STATE_LOG:
                continue
            groups = (
                definition.contact_groups
                if target[0] == "service"
                else self.config.host_contact_groups(target[1])
            )
            records = self.notifier.deliver(event, definition, self.states[target], groups, now)
            sent = [r for r in records if r.ok]
            self.counters["notifications_sent"] += len(sent)
            if records and event.kind in (EventKind.PROBLEM, EventKind.RENOTIFY_ELIGIBLE):
                self.states[target] = replace(self.states[target], last_notification=now)

    # -- audit -------------------------------------------------------------

    def _audit_event(self, event: StateEvent) -> None:
        status = event.status.name if hasattr(event.status, "name") else str(event.status)
        self._audit_line(event.at, event.target, event.kind.value, status, event.attempt, event.output)

    def _audit_line(
        self, at: float, target: Target, kind: str, status: str, attempt: int, output: str
    ) -> None:
        if self.audit_sink is None:
            return
        stamp = datetime.fromtimestamp(at, self.notifier.tz).isoformat()
        name = target[1] if target[0] == "host" else f"{target[1]}/{target[2]}"
        self.audit_sink(f"{stamp} {name} {kind} {status} {attempt} {_oneline(output)}")


def _oneline(text: str) -> str:
    return text.replace("\n", " ").replace("\r", " ")


class Engine:
    """Threaded runtime around EngineCore.

    Check results and operator commands enter one ordered queue; a single
    state thread applies them, so readers only ever see consistent
    snapshots.
    """

    def __init__(
        self,
        config: ResolvedConfig,
        settings: EngineSettings,
        clock: Callable[[], float] = time.time,
        dispatch_runner: Callable[..., DispatchRecord] | None = None,
    ) -> None:
        self.config = config
        self.settings = settings
        self.clock = clock
        self._audit_file = None
        self._dispatch_file = None
        audit_sink = self._open_log_sink(settings.audit_log, "_audit_file")
        dispatch_sink = self._open_log_sink(settings.dispatch_log, "_dispatch_file")
        notifier = Notifier(config, settings, dispatch_runner, dispatch_sink)
        self.core = EngineCore(config, settings, notifier, audit_sink)
        self.queue: queue.Queue = queue.Queue()
        self.scheduler = Scheduler(
            self._run_check,
            self._enqueue_result,
            interval_length=settings.interval_length,
            max_workers=settings.max_concurrent_checks,
            clock=clock,
            stagger=settings.stagger,
        )
        for name, host in config.hosts.items():
            if host.active_checks_enabled and host.check_command:
                self.scheduler.add(("host", name), host.normal_check_interval, host.retry_check_interval)
        for key, svc in config.services.items():
            if svc.active_checks_enabled:
                self.scheduler.add(("service",) + key, svc.normal_check_interval, svc.retry_check_interval)
        self.core.request_host_check = lambda host: self.scheduler.force(("host", host))

        self.gateway: Gateway | None = None
        if settings.gateway_listen:
            token = read_token_file(settings.api_token_file)
            self.gateway = Gateway(
                parse_listen(settings.gateway_listen), self._enqueue_passive, token=token
            )

        self._snapshot: dict[Target, MonitorState] = dict(self.core.states)
        self._snapshot_at: float = clock()
        self._thread: threading.Thread | None = None
        self._stopping = threading.Event()
        self._last_store_write = 0.0

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> None:
        os.makedirs(self.settings.status_dir, exist_ok=True)
        retained = read_retention(self.settings.retention_file)
        if retained:
            dropped = self.core.restore(retained)
            log.info("restored %d retained states (%d stale dropped)", len(retained) - dropped, dropped)
        self._publish_snapshot()
        self._thread = threading.Thread(target=self._state_loop, name="state", daemon=True)
        self._thread.start()
        self.scheduler.start()
        if self.gateway is not None:
            self.gateway.start()

    def stop(self) -> None:
        self.scheduler.stop()
        if self.gateway is not None:
            self.gateway.stop()
        self._stopping.set()
        if self._thread is not None:
            self._thread.join(timeout=10)
            self._thread = None
        self._write_stores()
        for handle in (self._audit_file, self._dispatch_file):
            if handle is not None:
                handle.close()
        self._audit_file = self._dispatch_file = None

    # -- queue feeds ---------------------------------------------------------

    def _enqueue_result(self, target: Target, result: CheckResult) -> None:
        self.queue.put(("result", target, result))

    def _enqueue_passive(self, record: PassiveResultLine) -> None:
        self.queue.put(("passive", record))

    def submit_passive(self, record: PassiveResultLine) -> None:
        """API entry: validate the target up front, then enqueue."""
        if record.kind is ResultKind.SERVICE:
            definition = self.config.services.get((record.host, record.service))
            if definition is None:
                raise UnknownTargetError((record.host, record.service))
            if not definition.passive_checks_enabled:
                raise TargetStateError("passive checks disabled for this service")
        else:
            host = self.config.hosts.get(record.host)
            if host is None:
                raise UnknownTargetError(record.host)
            if not host.passive_checks_enabled:
                raise TargetStateError("passive checks disabled for this host")
        self._enqueue_passive(record)

    def submit_ack(self, host: str, service: str | None, who: str, comment: str) -> None:
        target = self._target(host, service)
        state = self._snapshot.get(target)
        if state is None:
            raise UnknownTargetError(target)
        if state.state_type is not StateType.HARD or is_ok_status(state.current_status):
            raise TargetStateError("not in problem state")
        self.queue.put(("ack", target, who, comment))

    def submit_downtime(self, host: str, service: str | None, start: float, end: float) -> None:
        if end <= start:
            raise DowntimeError("downtime end must be after start")
        target = self._target(host, service)
        if target not in self._snapshot:
            raise UnknownTargetError(target)
        self.queue.put(("downtime", target, start, end))

    def force_check(self, host: str, service: str | None) -> None:
        target = self._target(host, service)
        if target not in self._snapshot:
            raise UnknownTargetError(target)
        if not self.scheduler.has(target):
            raise TargetStateError("target is not actively checked")
        self.scheduler.force(target)

    def _target(self, host: str, service: str | None) -> Target:
        return ("host", host) if service is None else ("service", host, service)

    # -- reads ---------------------------------------------------------------

    def status_snapshot(self) -> tuple[dict[Target, MonitorState], float]:
        return self._snapshot, self._snapshot_at

    def stats(self) -> dict[str, int]:
        merged = dict(self.core.counters)
        merged.update({f"scheduler_{k}": v for k, v in self.scheduler.stats().items()})
        if self.gateway is not None:
            merged["gateway_accepted"] = self.gateway.accepted
            merged["gateway_rejected"] = self.gateway.rejected
        return merged

    # -- internals -------------------------------------------------------------

    def _state_loop(self) -> None:
        while not self._stopping.is_set():
            try:
                item = self.queue.get(timeout=0.2)
            except queue.Empty:
                item = None
            processed = 0
            while item is not None:
                self._process(item)
                processed += 1
                if processed >= 200:
                    break
                try:
                    item = self.queue.get_nowait()
                except queue.Empty:
                    item = None
            if processed:
                self._publish_snapshot()
            now = self.clock()
            if now - self._last_store_write >= self.settings.status_interval_seconds:
                self._write_stores()
                self._last_store_write = now
        # drain whatever arrived before the stop flag
        while True:
            try:
                self._process(self.queue.get_nowait())
            except queue.Empty:
                break
        self._publish_snapshot()

    def _process(self, item: tuple) -> None:
        now = self.clock()
        kind = item[0]
        try:
            if kind == "result":
                _, target, result = item
                self.core.process_result(target, result, now)
                self._sync_retry_flag(target)
            elif kind == "passive":
                self.core.process_passive(item[1], now)
            elif kind == "ack":
                _, target, who, comment = item
                self.core.process_ack(target, who, comment, now)
            elif kind == "downtime":
                _, target, start, end = item
                self.core.process_downtime(target, start, end, now)
        except (AckError, DowntimeError, UnknownTargetError) as exc:
            log.warning("command %r rejected: %s", kind, exc)
        except Exception:
            log.exception("state thread failed on %r", item)

    def _sync_retry_flag(self, target: Target) -> None:
        state = self.core.states.get(target)
        if state is None:
            return
        in_retry = state.state_type is StateType.SOFT and not is_ok_status(state.current_status)
        self.scheduler.set_retry(target, in_retry)

    def _publish_snapshot(self) -> None:
        self._snapshot = dict(self.core.states)
        self._snapshot_at = self.clock()

    def _write_stores(self) -> None:
        snapshot = self.core.snapshot(self.clock())
        write_status(snapshot, self.settings.status_dir)
        write_retention(self.core.states, self.settings.retention_file)

    # -- check execution --------------------------------------------------------

    def _run_check(self, target: Target) -> CheckResult:
        argv = self.build_check_argv(target)
        if argv is None:
            return CheckResult(
                CheckStatus.UNKNOWN, "no check command configured", source=str(target)
            )
        return execute_plugin(argv, timeout=self.settings.plugin_timeout)

    def build_check_argv(self, target: Target) -> list[str] | None:
        if target[0] == "host":
            host = self.config.hosts.get(target[1])
            if host is None or not host.check_command:
                return None
            command = self.config.commands.get(host.check_command)
            if command is None:
                return None
            return expand_command(command.command_line, host, None, host.check_args)
        host = self.config.hosts.get(target[1])
        service = self.config.services.get((target[1], target[2]))
        if service is None:
            return None
        command = self.config.commands.get(service.check_command)
        if command is None:
            return None
        return expand_command(command.command_line, host, service, service.check_args)

    def _open_log_sink(self, path: str, attr: str):
        if not path:
            return None
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        handle = open(path, "a", encoding="utf-8", buffering=1)
        setattr(self, attr, handle)
        lock = threading.Lock()

        def sink(line: str) -> None:
            with lock:
                handle.write(line + "\n")

        return sink


def expand_command(
    command_line: str,
    host: HostDef | None,
    service: ServiceDef | None,
    args: tuple[str, ...],
) -> list[str]:
    """Expand check command macros and split into argv."""
    macros = {
        "HOSTNAME": host.host_name if host else "",
        "HOSTADDRESS": host.address if host else "",
        "HOSTALIAS": host.alias if host else "",
        "SERVICEDESC": service.service_description if service else "",
    }
    for i, arg in enumerate(args[:9], start=1):
        macros[f"ARG{i}"] = arg

    def substitute(match: re.Match) -> str:
        return macros.get(match.group(1), "")

    expanded = _MACRO_RE.sub(substitute, command_line)
    return shlex.split(expanded)
