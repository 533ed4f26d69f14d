"""HTTP API behavior against a live threaded engine."""

import time

import pytest
from fastapi.testclient import TestClient

from sentinel.api import create_app
from sentinel.engine import Engine
from sentinel.objconf import parse_objects, resolve_templates, validate
from sentinel.settings import EngineSettings

API_CONFIG = """
define command{
    command_name noop
    command_line /bin/true
}
define contactgroup{
    contactgroup_name ops
    channels noop
}
define host{
    host_name web1
    address 10.0.0.1
    max_check_attempts 1
    active_checks_enabled 0
    contact_groups ops
}
define host{
    host_name web2
    address 10.0.0.2
    max_check_attempts 1
    active_checks_enabled 0
    contact_groups ops
}
define hostgroup{
    hostgroup_name night
    members web1
}
define service{
    service_description http
    host_name web1
    check_command noop
    check_period 24x7
    max_check_attempts 1
    active_checks_enabled 0
    contact_groups ops
}
define service{
    service_description ping
    host_name web2
    check_command noop
    check_period 24x7
    max_check_attempts 1
    active_checks_enabled 1
    normal_check_interval 3600
    passive_checks_enabled 0
    contact_groups ops
}
"""


def build_engine(tmp_path, text=API_CONFIG):
    blocks, diags = parse_objects(text)
    config, rdiags = resolve_templates(blocks)
    assert diags == [] and rdiags == []
    assert validate(config) == []
    settings = EngineSettings(
        interval_length=1.0,
        status_dir=str(tmp_path / "status"),
        retention_file=str(tmp_path / "retention.dat"),
        status_interval_seconds=3600,
        stagger=False,
        timezone="UTC",
    )
    return Engine(config, settings)


@pytest.fixture
def client(tmp_path):
    engine = build_engine(tmp_path)
    engine.start()
    try:
        yield TestClient(create_app(engine)), engine
    finally:
        engine.stop()


def wait_for(predicate, timeout=5.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        if predicate():
            return True
        time.sleep(0.02)
    return predicate()


def submit_critical(client, host="web1", service="http", output="boom"):
    response = client.post(
        "/api/v1/result",
        json={"kind": "SERVICE", "host": host, "service": service, "code": 2, "output": output},
    )
    assert response.status_code == 202


def service_status(client, host, service):
    response = client.get(f"/api/v1/objects/{host}/{service}")
    assert response.status_code == 200
    return response.json()


def test_status_counts_and_objects(client):
    api, _ = client
    document = api.get("/api/v1/status").json()
    assert document["counts"]["hosts"]["total"] == 2
    assert document["counts"]["services"]["total"] == 2
    assert document["counts"]["hosts"]["up"] == 2
    assert len(document["objects"]) == 4
    # counts always equal the aggregation of the returned objects
    hosts = [o for o in document["objects"] if o["service"] is None]
    assert len(hosts) == document["counts"]["hosts"]["total"]


def test_problem_only_empty_when_all_ok(client):
    api, _ = client
    document = api.get("/api/v1/status", params={"problem_only": "true"}).json()
    assert document["objects"] == []
    assert document["counts"]["services"]["total"] == 0


def test_result_becomes_visible_in_status(client):
    api, _ = client
    submit_critical(api)
    assert wait_for(lambda: service_status(api, "web1", "http")["status"] == "CRITICAL")
    document = api.get("/api/v1/status", params={"problem_only": "true"}).json()
    assert [o["service"] for o in document["objects"]] == ["http"]


def test_hostgroup_filter(client):
    api, _ = client
    document = api.get("/api/v1/status", params={"hostgroup": "night"}).json()
    names = {(o["host"], o["service"]) for o in document["objects"]}
    assert names == {("web1", None), ("web1", "http")}


def test_unknown_hostgroup_404_with_error_field(client):
    api, _ = client
    response = api.get("/api/v1/status", params={"hostgroup": "nope"})
    assert response.status_code == 404
    assert "error" in response.json()


def test_get_unknown_host_404(client):
    api, _ = client
    assert api.get("/api/v1/objects/ghost").status_code == 404
    assert api.get("/api/v1/objects/web1/ghost").status_code == 404


def test_get_host_includes_services(client):
    api, _ = client
    body = api.get("/api/v1/objects/web1").json()
    assert body["host"]["status"] == "UP"
    assert [s["service"] for s in body["services"]] == ["http"]


def test_ack_flow(client):
    api, _ = client
    submit_critical(api)
    assert wait_for(lambda: service_status(api, "web1", "http")["status"] == "CRITICAL")
    response = api.post(
        "/api/v1/ack",
        json={"host": "web1", "service": "http", "who": "op", "comment": "known"},
    )
    assert response.status_code == 202
    assert wait_for(lambda: service_status(api, "web1", "http")["acknowledged"])


def test_ack_unknown_target_404(client):
    api, _ = client
    response = api.post("/api/v1/ack", json={"host": "ghost", "who": "op"})
    assert response.status_code == 404
    assert "error" in response.json()


def test_ack_ok_object_409(client):
    api, _ = client
    response = api.post("/api/v1/ack", json={"host": "web1", "service": "http", "who": "op"})
    assert response.status_code == 409


def test_downtime_flow(client):
    api, engine = client
    now = engine.clock()
    response = api.post(
        "/api/v1/downtime",
        json={"host": "web1", "service": "http", "start": now - 1, "end": now + 3600},
    )
    assert response.status_code == 202
    assert wait_for(lambda: service_status(api, "web1", "http")["in_downtime"])


def test_downtime_end_before_start_400(client):
    api, _ = client
    response = api.post(
        "/api/v1/downtime", json={"host": "web1", "service": "http", "start": 100, "end": 50}
    )
    assert response.status_code == 400
    assert "error" in response.json()


def test_downtime_on_hostgroup_404(client):
    api, _ = client
    response = api.post("/api/v1/downtime", json={"host": "night", "start": 1, "end": 2})
    assert response.status_code == 404


def test_force_check_active_service(client):
    api, _ = client
    response = api.post("/api/v1/check", json={"host": "web2", "service": "ping"})
    assert response.status_code == 202
    # noop exits 0: the forced check lands as OK with fresh last_check
    assert wait_for(lambda: service_status(api, "web2", "ping")["last_check"] > 0)


def test_force_check_passive_only_409(client):
    api, _ = client
    response = api.post("/api/v1/check", json={"host": "web1", "service": "http"})
    assert response.status_code == 409


def test_force_check_unknown_404(client):
    api, _ = client
    assert api.post("/api/v1/check", json={"host": "ghost"}).status_code == 404


def test_result_code_out_of_range_400(client):
    api, _ = client
    response = api.post(
        "/api/v1/result", json={"kind": "SERVICE", "host": "web1", "service": "http", "code": 7}
    )
    assert response.status_code == 400
    assert "error" in response.json()


def test_result_for_passive_disabled_409(client):
    api, _ = client
    response = api.post(
        "/api/v1/result", json={"kind": "SERVICE", "host": "web2", "service": "ping", "code": 2}
    )
    assert response.status_code == 409


def test_result_malformed_400(client):
    api, _ = client
    response = api.post("/api/v1/result", json={"kind": "BOGUS", "host": "web1", "code": 0})
    assert response.status_code == 400
    assert "error" in response.json()


def test_reads_do_not_mutate(client):
    api, _ = client
    submit_critical(api)
    assert wait_for(lambda: service_status(api, "web1", "http")["status"] == "CRITICAL")
    before = api.get("/api/v1/status").json()
    for _ in range(5):
        api.get("/api/v1/status")
        api.get("/api/v1/objects/web1")
        api.get("/api/v1/objects/web1/http")
    after = api.get("/api/v1/status").json()
    before.pop("stats"), after.pop("stats")
    assert before == after


def test_bearer_token_enforced(tmp_path):
    engine = build_engine(tmp_path)
    engine.start()
    try:
        api = TestClient(create_app(engine, token="sesame"))
        assert api.get("/api/v1/status").status_code == 401
        bad = api.get("/api/v1/status", headers={"Authorization": "Bearer wrong"})
        assert bad.status_code == 401
        good = api.get("/api/v1/status", headers={"Authorization": "Bearer sesame"})
        assert good.status_code == 200
    finally:
        engine.stop()


def test_pagination(client):
    api, _ = client
    page1 = api.get("/api/v1/status", params={"limit": 2, "offset": 0}).json()
    page2 = api.get("/api/v1/status", params={"limit": 2, "offset": 2}).json()
    assert len(page1["objects"]) == 2
    assert len(page2["objects"]) == 2
    ids = {(o["host"], o["service"]) for o in page1["objects"] + page2["objects"]}
    assert len(ids) == 4
