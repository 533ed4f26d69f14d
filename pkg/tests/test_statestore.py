"""Flat-file persistence: round trips, crash safety, retention filtering."""

import os

import pytest
from hypothesis import given, strategies as st

from sentinel.checkcore.plugin import CheckStatus
from sentinel.statemachine import HostStatus, MonitorState, StateType
from sentinel.statestore import (
    StatusSnapshot,
    read_retention,
    read_status,
    restore_retention,
    write_retention,
    write_status,
)


def sample_state(status=CheckStatus.CRITICAL, **kwargs):
    defaults = dict(
        current_status=status,
        state_type=StateType.HARD,
        attempt=1,
        last_check=1000.5,
        last_state_change=990.25,
        last_hard_change=990.25,
        last_notification=995.0,
        acknowledged=True,
        ack_who="op",
        ack_comment="known issue",
        downtimes=((2000.0, 3000.0),),
        last_output="Connection refused by host",
    )
    defaults.update(kwargs)
    return MonitorState(**defaults)


def test_snapshot_round_trip(tmp_path):
    snapshot = StatusSnapshot(
        generated_at=1234.5,
        hosts={
            "netra8": sample_state(HostStatus.DOWN),
            "gw": MonitorState.fresh_host(),
        },
        services={
            ("netra8", "fileserver"): sample_state(),
            ("netra8", "afs"): MonitorState.fresh_service(),
            ("gw", "ping"): sample_state(CheckStatus.WARNING, acknowledged=False),
        },
    )
    assert write_status(snapshot, str(tmp_path))
    loaded = read_status(str(tmp_path))
    assert loaded == snapshot
    assert len(loaded.hosts) + len(loaded.services) == 5


def test_empty_snapshot_round_trip(tmp_path):
    snapshot = StatusSnapshot(generated_at=7.0)
    assert write_status(snapshot, str(tmp_path))
    loaded = read_status(str(tmp_path))
    assert loaded == snapshot


def test_missing_status_file_is_none(tmp_path):
    assert read_status(str(tmp_path)) is None


def test_interrupted_write_keeps_previous_snapshot(tmp_path, monkeypatch):
    first = StatusSnapshot(generated_at=1.0, hosts={"h": MonitorState.fresh_host()})
    assert write_status(first, str(tmp_path))

    def explode(src, dst):
        raise OSError("simulated crash before rename")

    monkeypatch.setattr(os, "replace", explode)
    second = StatusSnapshot(generated_at=2.0, hosts={"h": sample_state(HostStatus.DOWN)})
    assert not write_status(second, str(tmp_path))
    monkeypatch.undo()

    loaded = read_status(str(tmp_path))
    assert loaded == first
    # no temp litter that would confuse readers
    assert os.listdir(tmp_path) == ["status.dat"]


def test_retention_round_trip(tmp_path):
    path = str(tmp_path / "retention.dat")
    states = {
        ("host", "netra8"): sample_state(HostStatus.DOWN),
        ("service", "netra8", "fileserver"): sample_state(),
    }
    assert write_retention(states, path)
    assert read_retention(path) == states


def test_missing_retention_is_cold_start(tmp_path):
    assert read_retention(str(tmp_path / "nope.dat")) == {}


def test_corrupt_retention_is_cold_start(tmp_path):
    path = tmp_path / "retention.dat"
    path.write_text("type=meta\ngenerated_at=zzz\n\ntype=what\n")
    assert read_retention(str(path)) == {}


def test_stale_retention_entries_dropped_with_count():
    states = {
        ("host", "kept"): MonitorState.fresh_host(),
        ("host", "removed"): MonitorState.fresh_host(),
        ("service", "kept", "ping"): MonitorState.fresh_service(),
    }
    kept, dropped = restore_retention(states, {("host", "kept"), ("service", "kept", "ping")})
    assert dropped == 1
    assert set(kept) == {("host", "kept"), ("service", "kept", "ping")}


def test_generated_at_monotone_across_writes(tmp_path):
    stamps = [10.0, 20.0, 30.0]
    seen = []
    for stamp in stamps:
        write_status(StatusSnapshot(generated_at=stamp), str(tmp_path))
        seen.append(read_status(str(tmp_path)).generated_at)
    assert seen == sorted(seen)


_status = st.sampled_from(list(CheckStatus))
_floats = st.floats(min_value=0, max_value=2e9, allow_nan=False)
_text = st.text(
    alphabet=st.characters(blacklist_characters="\n\r", blacklist_categories=("Cs",)),
    max_size=40,
)


@st.composite
def monitor_states(draw):
    soft = draw(st.booleans())
    return MonitorState(
        current_status=draw(_status),
        state_type=StateType.SOFT if soft else StateType.HARD,
        attempt=draw(st.integers(1, 10)) if soft else 1,
        last_check=draw(_floats),
        last_state_change=draw(_floats),
        last_hard_change=draw(_floats),
        last_notification=draw(st.none() | _floats),
        acknowledged=draw(st.booleans()),
        ack_who=draw(_text),
        ack_comment=draw(_text),
        downtimes=tuple(
            sorted(
                (min(a, b), max(a, b) + 1.0)
                for a, b in draw(st.lists(st.tuples(_floats, _floats), max_size=3))
            )
        ),
        last_output=draw(_text),
    )


@given(st.dictionaries(st.text("abcdefgh", min_size=1, max_size=6), monitor_states(), max_size=5))
def test_service_states_round_trip_property(tmp_path_factory, states):
    tmp_path = tmp_path_factory.mktemp("store")
    path = str(tmp_path / "retention.dat")
    keyed = {("service", host, "svc"): state for host, state in states.items()}
    write_retention(keyed, path)
    assert read_retention(path) == keyed
