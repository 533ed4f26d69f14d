"""Shared fixtures: golden config samples and stub plugin factories."""

from __future__ import annotations

import os
import stat
import sys
import textwrap

import pytest

# Golden flat-file samples used across parser, resolver and acceptance tests.
SERVICE_TEMPLATE_TEXT = textwrap.dedent(
    """\
    define service{
        name                fileserver
        service_description  fileserver
        is_volatile          0
        active_checks_enabled 0
        passive_checks_enabled 1
        check_period         24x7
        max_check_attempts   10
        normal_check_interval 1
        retry_check_interval  5
        notification_interval 2200
        notification_period   24x7
        notification_options  w,u,c,r
        check_command         doing some tests
        register              0
    }
    """
)

HOST_AND_GROUP_TEXT = textwrap.dedent(
    """\
    define hostgroup{
        name                night
        hostgroup_name      night
        alias               night
        contact_groups      sgi-admins
        members             netra8,test1,test2
    }
    define host{
        host_name           netra8
        alias               netra AFS Server
        address             131.169.40.109
        parents             route-194,route-40
        use                 hostcheck
    }
    """
)

HOSTCHECK_TEMPLATE_TEXT = textwrap.dedent(
    """\
    define host{
        name                hostcheck
        check_command       check-host-alive
        max_check_attempts  3
        register            0
    }
    """
)


@pytest.fixture
def service_template_text() -> str:
    return SERVICE_TEMPLATE_TEXT


@pytest.fixture
def host_and_group_text() -> str:
    return HOST_AND_GROUP_TEXT


@pytest.fixture
def hostcheck_template_text() -> str:
    return HOSTCHECK_TEMPLATE_TEXT


def write_script(path, body: str) -> str:
    """Write an executable script and return its path as str."""
    path.write_text(body)
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return str(path)


@pytest.fixture
def make_plugin(tmp_path):
    """Factory for stub check plugins speaking the exit-code protocol."""

    counter = {"n": 0}

    def factory(exit_code: int = 0, output: str = "OK", sleep: float = 0.0) -> str:
        counter["n"] += 1
        body = "#!%s\nimport sys, time\n" % sys.executable
        if sleep:
            body += f"time.sleep({sleep})\n"
        body += f"print({output!r})\nsys.exit({exit_code})\n"
        return write_script(tmp_path / f"plugin{counter['n']}.py", body)

    return factory


@pytest.fixture
def outbox(tmp_path):
    """A file-sink notification channel; returns (channel command, path)."""
    path = tmp_path / "outbox.txt"
    return f"cat >> {path}", path


def free_port() -> int:
    import socket

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]
