"""DOWN vs UNREACHABLE classification against a fixpoint-iteration oracle."""

import random

from sentinel.statemachine import HostStatus, host_reachability

UP, DOWN, UNREACHABLE = HostStatus.UP, HostStatus.DOWN, HostStatus.UNREACHABLE


def oracle(check, parents):
    """Independent reference: iterate assignments until nothing changes."""
    status = {h: (UP if ok else None) for h, ok in check.items()}
    changed = True
    while changed:
        changed = False
        for host, ok in check.items():
            if status[host] is not None:
                continue
            ps = [p for p in parents.get(host, ()) if p in check]
            if not ps or any(status.get(p) is UP for p in ps):
                status[host] = DOWN
                changed = True
            elif all(status.get(p) in (DOWN, UNREACHABLE) for p in ps):
                status[host] = UNREACHABLE
                changed = True
    return status


def test_host_behind_two_down_routes_is_unreachable():
    check = {"netra8": False, "route-194": False, "route-40": False}
    parents = {"netra8": ("route-194", "route-40")}
    result = host_reachability(check, parents)
    assert result["route-194"] is DOWN
    assert result["route-40"] is DOWN
    assert result["netra8"] is UNREACHABLE


def test_all_passing_all_up():
    check = {"a": True, "b": True, "c": True}
    result = host_reachability(check, {"b": ("a",), "c": ("b",)})
    assert set(result.values()) == {UP}


def test_one_up_parent_means_down():
    check = {"netra8": False, "route-194": False, "route-40": True}
    parents = {"netra8": ("route-194", "route-40")}
    result = host_reachability(check, parents)
    assert result["netra8"] is DOWN


def test_unknown_parent_treated_as_parentless():
    check = {"leaf": False}
    result = host_reachability(check, {"leaf": ("ghost",)})
    assert result["leaf"] is DOWN


def test_chain_of_failures_propagates():
    check = {"gw": False, "mid": False, "leaf": False}
    parents = {"mid": ("gw",), "leaf": ("mid",)}
    result = host_reachability(check, parents)
    assert result["gw"] is DOWN
    assert result["mid"] is UNREACHABLE
    assert result["leaf"] is UNREACHABLE


def random_dag(rng, n):
    """Parents always have lower index, so the graph is acyclic."""
    parents = {}
    for i in range(n):
        candidates = list(range(i))
        count = rng.randint(0, min(3, len(candidates)))
        parents[f"h{i}"] = tuple(f"h{j}" for j in rng.sample(candidates, count))
    return parents


def test_random_dags_match_oracle():
    rng = random.Random(1270)
    for _ in range(500):
        n = rng.randint(1, 10)
        parents = random_dag(rng, n)
        check = {f"h{i}": rng.random() < 0.6 for i in range(n)}
        assert host_reachability(check, parents) == oracle(check, parents)


def test_unreachable_monotone_in_failure_set():
    rng = random.Random(620)
    for _ in range(200):
        n = rng.randint(2, 10)
        parents = random_dag(rng, n)
        check = {f"h{i}": rng.random() < 0.5 for i in range(n)}
        passing = [h for h, ok in check.items() if ok]
        if not passing:
            continue
        before = host_reachability(check, parents)
        worse = dict(check)
        worse[rng.choice(passing)] = False
        after = host_reachability(worse, parents)
        unreachable_before = {h for h, s in before.items() if s is UNREACHABLE}
        unreachable_after = {h for h, s in after.items() if s is UNREACHABLE}
        assert unreachable_before <= unreachable_after
