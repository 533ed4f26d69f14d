"""Soft/hard transition rules against an independent reference automaton."""

import random

import pytest

from sentinel.checkcore.plugin import CheckOrigin, CheckResult, CheckStatus
from sentinel.statemachine import (
    AckError,
    DowntimeError,
    EventKind,
    MonitorState,
    StateType,
    acknowledge,
    add_downtime,
    apply_result,
    in_downtime,
)

OK = CheckStatus.OK
W = CheckStatus.WARNING
C = CheckStatus.CRITICAL
U = CheckStatus.UNKNOWN


def res(status, origin=CheckOrigin.ACTIVE, output="out"):
    return CheckResult(status, output, origin=origin)


def drive(sequence, max_attempts, volatile=False, state=None):
    """Apply a status sequence; returns (final state, notify-worthy events)."""
    state = state or MonitorState.fresh_service()
    notify_events = []
    for i, status in enumerate(sequence):
        state, events = apply_result(
            state, max_attempts, res(status), now=float(i + 1), is_volatile=volatile
        )
        notify_events.extend(e for e in events if e.kind is not EventKind.STATE_LOG)
    return state, notify_events


def reference_trace(sequence, max_attempts, volatile=False):
    """Independent oracle: recompute each step purely from result history.

    The trailing run of consecutive non-OK results decides everything: a run
    shorter than max_check_attempts is SOFT with attempt = run length; a run
    at or past it is a confirmed HARD problem (attempt resets to 1).  PROBLEM
    fires when the run first reaches max_check_attempts, again whenever the
    status value changes inside a confirmed problem, and on every non-OK
    result of a volatile service; RECOVERY fires when OK ends a confirmed
    problem.
    """
    steps = []
    for i, status in enumerate(sequence):
        run = 0
        j = i
        while j >= 0 and sequence[j] is not OK:
            run += 1
            j -= 1
        prev_run = 0
        if i > 0:
            j = i - 1
            while j >= 0 and sequence[j] is not OK:
                prev_run += 1
                j -= 1
        events = []
        if status is OK:
            state_type, attempt = StateType.HARD, 1
            if prev_run >= max_attempts:
                events.append(EventKind.RECOVERY)
        elif run >= max_attempts:
            state_type, attempt = StateType.HARD, 1
            if run == max_attempts:
                events.append(EventKind.PROBLEM)
            elif sequence[i] != sequence[i - 1]:
                events.append(EventKind.PROBLEM)
            elif volatile:
                events.append(EventKind.PROBLEM)
            else:
                events.append(EventKind.RENOTIFY_ELIGIBLE)
        else:
            state_type, attempt = StateType.SOFT, run
        steps.append((state_type, status, attempt, events))
    return steps


def trace_implementation(sequence, max_attempts, volatile=False):
    state = MonitorState.fresh_service()
    steps = []
    for i, status in enumerate(sequence):
        state, events = apply_result(
            state, max_attempts, res(status), now=float(i + 1), is_volatile=volatile
        )
        kinds = [e.kind for e in events if e.kind is not EventKind.STATE_LOG]
        steps.append((state.state_type, state.current_status, state.attempt, kinds))
    return steps


def test_ten_attempts_single_problem_event():
    state, events = drive([C] * 9, max_attempts=10)
    assert state.state_type is StateType.SOFT
    assert state.attempt == 9
    assert events == []
    state, events = drive([C] * 10, max_attempts=10)
    assert state.state_type is StateType.HARD
    assert state.attempt == 1
    assert [e.kind for e in events] == [EventKind.PROBLEM]


def test_recovery_after_hard_problem():
    state, events = drive([C] * 10 + [OK], max_attempts=10)
    assert state.current_status is OK
    assert state.state_type is StateType.HARD
    recoveries = [e for e in events if e.kind is EventKind.RECOVERY]
    assert len(recoveries) == 1


def test_ok_to_ok_logs_only():
    state = MonitorState.fresh_service()
    state, events = apply_result(state, 3, res(OK), now=1.0)
    assert [e.kind for e in events] == [EventKind.STATE_LOG]
    assert state.current_status is OK
    assert state.state_type is StateType.HARD


def test_interrupted_sequence_only_alerts_once_confirmed():
    _, events = drive([C, C, OK, C, C, C], max_attempts=3)
    assert [e.kind for e in events] == [EventKind.PROBLEM]


def test_soft_recovery_never_notifies():
    _, events = drive([C, C, OK], max_attempts=3)
    assert events == []


def test_max_attempts_one_is_immediately_hard():
    state, events = drive([C], max_attempts=1)
    assert state.state_type is StateType.HARD
    assert [e.kind for e in events] == [EventKind.PROBLEM]


def test_status_escalation_in_hard_reraises():
    _, events = drive([W, W, W, C], max_attempts=3)
    kinds = [e.kind for e in events]
    assert kinds == [EventKind.PROBLEM, EventKind.PROBLEM]
    assert events[0].status is W
    assert events[1].status is C


def test_same_status_in_hard_offers_renotify():
    _, events = drive([C, C, C], max_attempts=2)
    assert [e.kind for e in events] == [EventKind.PROBLEM, EventKind.RENOTIFY_ELIGIBLE]


def test_volatile_reraises_every_hard_result():
    _, events = drive([C, C, C, C], max_attempts=2, volatile=True)
    assert [e.kind for e in events] == [EventKind.PROBLEM] * 3


def test_passive_result_rejected_when_disabled():
    state = MonitorState.fresh_service()
    before = state
    state, events = apply_result(
        state, 3, res(C, origin=CheckOrigin.PASSIVE), now=1.0, passive_checks_enabled=False
    )
    assert state == before
    assert len(events) == 1
    assert events[0].kind is EventKind.STATE_LOG
    assert "rejected" in events[0].output


def test_passive_result_accepted_when_enabled():
    state = MonitorState.fresh_service()
    state, _ = apply_result(
        state, 1, res(C, origin=CheckOrigin.PASSIVE), now=1.0, passive_checks_enabled=True
    )
    assert state.current_status is C


def test_acknowledge_lifecycle():
    state, _ = drive([C], max_attempts=1)
    state = acknowledge(state, "op", "looking into it", now=5.0)
    assert state.acknowledged
    state, events = apply_result(state, 1, res(OK), now=6.0)
    assert not state.acknowledged
    assert any(e.kind is EventKind.RECOVERY for e in events)


def test_acknowledge_requires_hard_problem():
    with pytest.raises(AckError, match="not in problem state"):
        acknowledge(MonitorState.fresh_service(), "op", "c", now=1.0)
    soft, _ = drive([C], max_attempts=3)
    with pytest.raises(AckError):
        acknowledge(soft, "op", "c", now=1.0)


def test_escalation_clears_acknowledgment():
    state, _ = drive([W], max_attempts=1)
    state = acknowledge(state, "op", "known", now=2.0)
    state, events = apply_result(state, 1, res(C), now=3.0)
    assert not state.acknowledged
    assert any(e.kind is EventKind.PROBLEM for e in events)


def test_downtime_window_membership():
    state = MonitorState.fresh_service()
    state = add_downtime(state, 36000.0, 39600.0)
    assert in_downtime(state, 37800.0)
    assert not in_downtime(state, 39600.0)  # half-open end
    assert not in_downtime(state, 35999.9)
    assert not in_downtime(MonitorState.fresh_service(), 37800.0)


def test_downtime_rejects_empty_window():
    with pytest.raises(DowntimeError):
        add_downtime(MonitorState.fresh_service(), 100.0, 100.0)


def test_downtime_suppresses_all_but_state_log():
    state = MonitorState.fresh_service()
    state = add_downtime(state, 0.0, 100.0)
    for now in (1.0, 2.0, 3.0):
        state, events = apply_result(state, 3, res(C), now=now)
        assert [e.kind for e in events] == [EventKind.STATE_LOG]
    assert state.state_type is StateType.HARD  # state still advanced


def test_past_downtimes_pruned_lazily():
    state = MonitorState.fresh_service()
    state = add_downtime(state, 0.0, 10.0)
    state, _ = apply_result(state, 3, res(OK), now=20.0)
    assert state.downtimes == ()


def test_unreachable_host_suppresses_service_problems():
    state = MonitorState.fresh_service()
    state, events = apply_result(state, 1, res(C), now=1.0, host_unreachable=True)
    assert [e.kind for e in events] == [EventKind.STATE_LOG]
    # recovery still passes once the service itself comes back
    state, events = apply_result(state, 1, res(OK), now=2.0, host_unreachable=True)
    assert EventKind.RECOVERY in [e.kind for e in events]


def test_hard_state_implies_attempt_reset():
    state, _ = drive([C, C, C, C, C], max_attempts=3)
    assert state.state_type is StateType.HARD
    assert state.attempt == 1


def test_random_sequences_match_reference():
    rng = random.Random(20030319)
    statuses = [OK, W, C, U]
    for _ in range(400):
        max_attempts = rng.choice([1, 2, 3, 5])
        volatile = rng.random() < 0.2
        sequence = [rng.choice(statuses) for _ in range(rng.randint(1, 40))]
        expected = reference_trace(sequence, max_attempts, volatile)
        got = trace_implementation(sequence, max_attempts, volatile)
        expected_flat = [(t, s, a, list(e)) for t, s, a, e in expected]
        assert got == expected_flat, (sequence, max_attempts, volatile)


def test_event_alternation_without_volatility():
    rng = random.Random(4)
    for _ in range(100):
        sequence = [rng.choice([OK, C]) for _ in range(rng.randint(2, 30))] + [OK]
        _, events = drive(sequence, max_attempts=2)
        collapsed = [e.kind for e in events if e.kind is not EventKind.RENOTIFY_ELIGIBLE]
        for first, second in zip(collapsed, collapsed[1:]):
            assert first != second  # PROBLEM and RECOVERY alternate
        assert collapsed.count(EventKind.PROBLEM) >= collapsed.count(EventKind.RECOVERY)
