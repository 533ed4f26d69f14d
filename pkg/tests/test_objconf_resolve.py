"""Template resolution: inheritance chains, register semantics, dedup rules."""

import random

from hypothesis import given, strategies as st

from sentinel.objconf import parse_objects, print_config, resolve_templates


def resolve_text(text):
    blocks, parse_diags = parse_objects(text)
    config, diags = resolve_templates(blocks)
    return config, parse_diags + diags


def test_register_zero_block_yields_no_runtime_objects(service_template_text):
    config, diags = resolve_text(service_template_text)
    assert diags == []
    assert config.services == {}
    assert config.hosts == {}


def test_register_zero_template_remains_usable(service_template_text):
    instance = (
        "define service{\n"
        "    use fileserver\n"
        "    host_name web1\n"
        "}\n"
    )
    config, diags = resolve_text(service_template_text + instance)
    assert diags == []
    svc = config.services[("web1", "fileserver")]
    assert svc.max_check_attempts == 10
    assert svc.notification_interval == 2200
    assert svc.active_checks_enabled is False
    assert svc.passive_checks_enabled is True
    assert svc.notification_options == frozenset("wucr")


def test_host_inherits_from_template_locals_kept(host_and_group_text, hostcheck_template_text):
    config, diags = resolve_text(host_and_group_text + hostcheck_template_text)
    assert diags == []
    host = config.hosts["netra8"]
    assert host.check_command == "check-host-alive"
    assert host.max_check_attempts == 3
    assert host.address == "131.169.40.109"
    assert host.alias == "netra AFS Server"
    assert set(host.parents) == {"route-194", "route-40"}


def test_nearest_template_wins():
    text = (
        "define service{\n    name B\n    normal_check_interval 5\n    register 0\n}\n"
        "define service{\n    name A\n    use B\n    normal_check_interval 7\n    register 0\n}\n"
        "define service{\n"
        "    use A\n"
        "    service_description s\n"
        "    host_name h\n"
        "    check_command c\n"
        "    check_period 24x7\n"
        "    max_check_attempts 1\n"
        "}\n"
    )
    config, diags = resolve_text(text)
    assert diags == []
    assert config.services[("h", "s")].normal_check_interval == 7


def test_unknown_template_drops_object():
    config, diags = resolve_text("define host{\n    host_name h\n    address 1.1.1.1\n    use nope\n}\n")
    assert config.hosts == {}
    assert any("unknown" in d.message and d.severity == "error" for d in diags)


def test_use_cycle_names_the_cycle():
    text = (
        "define host{\n    name a\n    use b\n    register 0\n}\n"
        "define host{\n    name b\n    use a\n    register 0\n}\n"
        "define host{\n    host_name h\n    address 1.1.1.1\n    use a\n}\n"
    )
    config, diags = resolve_text(text)
    assert config.hosts == {}
    cycle_diags = [d for d in diags if "cycle" in d.message]
    assert cycle_diags
    assert "a" in cycle_diags[0].message and "b" in cycle_diags[0].message


def test_multiple_inheritance_rejected():
    text = (
        "define host{\n    name a\n    register 0\n}\n"
        "define host{\n    name b\n    register 0\n}\n"
        "define host{\n    host_name h\n    address 1.1.1.1\n    use a,b\n}\n"
    )
    config, diags = resolve_text(text)
    assert config.hosts == {}
    assert any("multiple inheritance" in d.message for d in diags)


def test_duplicate_service_first_wins():
    svc = (
        "define service{\n"
        "    service_description s\n"
        "    host_name h\n"
        "    check_command %s\n"
        "    check_period 24x7\n"
        "    max_check_attempts 1\n"
        "}\n"
    )
    config, diags = resolve_text(svc % "first" + svc % "second")
    assert config.services[("h", "s")].check_command == "first"
    assert any("duplicate service" in d.message for d in diags)


def test_missing_required_field_is_error():
    config, diags = resolve_text("define service{\n    service_description s\n    host_name h\n}\n")
    assert config.services == {}
    assert any("check_command" in d.message for d in diags)


def test_unknown_option_letter_is_error():
    text = (
        "define service{\n"
        "    service_description s\n    host_name h\n    check_command c\n"
        "    check_period 24x7\n    max_check_attempts 1\n"
        "    notification_options w,x\n"
        "}\n"
    )
    config, diags = resolve_text(text)
    assert config.services == {}
    assert any("unknown letters x" in d.message for d in diags)


def test_self_parent_removed_with_error():
    config, diags = resolve_text("define host{\n    host_name h\n    address 1.1.1.1\n    parents h,up\n}\n")
    assert config.hosts["h"].parents == ("up",)
    assert any("itself as a parent" in d.message for d in diags)


def test_command_reference_with_arguments():
    text = (
        "define service{\n"
        "    service_description s\n    host_name h\n"
        "    check_command check_tcp!110!--expect!+OK\n"
        "    check_period 24x7\n    max_check_attempts 1\n"
        "}\n"
    )
    config, diags = resolve_text(text)
    svc = config.services[("h", "s")]
    assert svc.check_command == "check_tcp"
    assert svc.check_args == ("110", "--expect", "+OK")


def test_builtin_24x7_injected():
    config, diags = resolve_text("")
    assert "24x7" in config.timeperiods
    assert config.timeperiods["24x7"].ranges[0] == ((0, 1440),)


def test_explicit_timeperiod_parses_ranges():
    text = (
        "define timeperiod{\n"
        "    timeperiod_name workhours\n"
        "    monday          08:00-18:00\n"
        "    friday          08:00-12:00,13:00-17:30\n"
        "}\n"
    )
    config, diags = resolve_text(text)
    assert diags == []
    tp = config.timeperiods["workhours"]
    assert tp.ranges[0] == ((480, 1080),)
    assert tp.ranges[4] == ((480, 720), (780, 1050))


def test_unknown_kind_preserved_with_warning():
    config, diags = resolve_text("define widget{\n    widget_name w\n}\n")
    assert any("unknown object kind" in d.message for d in diags)


VALID_SAMPLE = (
    "define command{\n    command_name check-alive\n    command_line ping $HOSTADDRESS$\n}\n"
    "define timeperiod{\n    timeperiod_name always\n    monday 00:00-24:00\n}\n"
    "define contactgroup{\n    contactgroup_name ops\n    channels mail-out\n}\n"
    "define command{\n    command_name mail-out\n    command_line sendmail $OUTPUT$\n}\n"
    "define host{\n    name base\n    check_command check-alive\n    max_check_attempts 2\n    register 0\n}\n"
    "define host{\n    host_name gw\n    address 10.0.0.1\n    use base\n}\n"
    "define host{\n    host_name web1\n    address 10.0.0.2\n    parents gw\n    use base\n}\n"
    "define service{\n    service_description http\n    host_name web1\n    check_command check-alive\n"
    "    check_period 24x7\n    max_check_attempts 3\n    contact_groups ops\n}\n"
    "define hostgroup{\n    hostgroup_name webfarm\n    members web1,gw\n    contact_groups ops\n}\n"
)


def test_order_independence_fixed_permutations():
    blocks, _ = parse_objects(VALID_SAMPLE)
    reference, ref_diags = resolve_templates(blocks)
    assert ref_diags == []
    rng = random.Random(7)
    for _ in range(10):
        shuffled = blocks[:]
        rng.shuffle(shuffled)
        config, diags = resolve_templates(shuffled)
        assert config == reference
        assert diags == []


@given(st.randoms(use_true_random=False))
def test_order_independence_property(rnd):
    blocks, _ = parse_objects(VALID_SAMPLE)
    reference, _ = resolve_templates(blocks)
    shuffled = blocks[:]
    rnd.shuffle(shuffled)
    config, diags = resolve_templates(shuffled)
    assert config == reference
    assert diags == []


def test_round_trip_print_reparse_is_fixpoint():
    config, diags = resolve_text(VALID_SAMPLE)
    assert diags == []
    printed = print_config(config, header="canonical form")
    blocks, parse_diags = parse_objects(printed)
    assert parse_diags == []
    config2, diags2 = resolve_templates(blocks)
    assert diags2 == []
    assert config2 == config
    # printing again reproduces the exact text: a true fixpoint
    assert print_config(config2, header="canonical form") == printed
