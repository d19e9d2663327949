import math

import numpy as np
import pytest

from theta_spanner.bounds import family_of, path_bound, spanning_ratio_bound
from theta_spanner.errors import PreconditionViolated
from theta_spanner.theta import ThetaGraph
from theta_spanner.verify import (
    adversarial_search,
    pair_ratio_report,
    random_instance,
    shortest_paths,
    spanning_chain_cases,
    tightness_fixture,
    worker_count,
)
from theta_spanner.visibility import Instance, verify_chain

from conftest import ALL_M, make_instance


def graph_from(n, edges):
    g = ThetaGraph(n, 6)
    for u, v, w in edges:
        g.add(u, v, w, (u, 0, 0))
    return g


def brute_force_distances(n, edges, source):
    """Shortest distances by enumerating every simple path from ``source``."""
    adj = {i: [] for i in range(n)}
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    best = [math.inf] * n
    best[source] = 0.0

    def walk(node, length, seen):
        for nxt, w in adj[node]:
            if nxt in seen:
                continue
            total = length + w
            best[nxt] = min(best[nxt], total)
            walk(nxt, total, seen | {nxt})

    walk(source, 0.0, {source})
    return best


def test_shortest_paths_examples():
    g = graph_from(2, [(0, 1, 2.5)])
    assert shortest_paths(g, 0).tolist() == [0.0, 2.5]
    g = graph_from(3, [(0, 2, 1.0), (2, 1, 1.5)])
    assert shortest_paths(g, 0).tolist() == [0.0, 2.5, 1.0]
    g = graph_from(3, [(0, 1, 1.0)])
    assert shortest_paths(g, 0)[2] == math.inf


def test_shortest_paths_match_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = 10
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.3:
                    edges.append((u, v, float(rng.uniform(0.1, 2.0))))
        g = graph_from(n, edges)
        for s in range(n):
            assert shortest_paths(g, s) == pytest.approx(brute_force_distances(n, edges, s), rel=1e-12)


def test_report_two_points():
    rep = pair_ratio_report(Instance.from_coords([(0, 0), (0.3, 1)]), 6)
    assert rep.max_ratio == 1.0 and rep.clean and rep.n_pairs == 1


def test_report_records():
    inst = make_instance(9, 2, n=25, n_constraints=8)
    rep = pair_ratio_report(inst, 9, per_pair=True)
    assert rep.clean
    assert len(rep.records) == rep.n_pairs
    for r in rep.records:
        assert r.delta >= r.euclid * (1 - 1e-12)
        assert r.ratio == pytest.approx(r.delta / r.euclid)
        assert r.bound == pytest.approx(path_bound(9, r.alpha))
        assert r.violation == (r.ratio > r.bound * (1 + 1e-7))
        assert r.bound <= spanning_ratio_bound(9) + 1e-12
    assert rep.max_ratio == max(r.ratio for r in rep.records)


def test_report_uses_smaller_direction():
    spec = family_of(7)
    inst = make_instance(7, 3, n=20, n_constraints=5)
    rep = pair_ratio_report(inst, spec, per_pair=True)
    for r in rep.records:
        assert r.bound <= path_bound(spec, spec.theta / 2 - r.alpha) + 1e-12


def test_report_deterministic():
    inst = make_instance(11, 5, n=30, n_constraints=10)
    a, b = pair_ratio_report(inst, 11, per_pair=True), pair_ratio_report(inst, 11, per_pair=True)
    assert a.records == b.records and a.argmax == b.argmax and a.max_ratio == b.max_ratio


def test_fixture_tightness():
    for m, eps in ((6, 1e-3), (10, 1e-3), (14, 1e-4)):
        spec = family_of(m)
        rep = pair_ratio_report(tightness_fixture(spec, eps), spec)
        target = 1 + 2 * math.sin(spec.theta / 2)
        assert target - 10 * eps <= rep.max_ratio <= rep.bound
        assert rep.argmax == (0, 1)
        assert rep.clean


def test_fixture_ratio_approaches_bound():
    ratios = [pair_ratio_report(tightness_fixture(6, eps), 6).max_ratio for eps in (0.3, 1e-1, 1e-2, 1e-3, 1e-4)]
    assert 1 < ratios[0] < 2
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert 2 - ratios[-1] < 1e-3


def test_fixture_preconditions():
    with pytest.raises(PreconditionViolated):
        tightness_fixture(8)
    with pytest.raises(PreconditionViolated):
        tightness_fixture(6, 0.0)
    with pytest.raises(PreconditionViolated):
        tightness_fixture(6, 1.0)


def test_random_instance_properties():
    rng = np.random.default_rng(1)
    inst = random_instance(40, 15, rng, 8)
    inst.validate()
    assert inst.n == 40 and len(inst.constraints) == 15
    assert ((inst.coords > -1e-3) & (inst.coords < 1 + 1e-3)).all()
    a = random_instance(20, 5, np.random.default_rng(9), 6)
    b = random_instance(20, 5, np.random.default_rng(9), 6)
    assert a == b


@pytest.mark.parametrize("m", ALL_M)
def test_random_reports_clean(m):
    for seed in range(3):
        rep = pair_ratio_report(make_instance(m, seed, n=30, n_constraints=12), m)
        assert rep.clean, rep.violations[:3]
        assert 1 <= rep.max_ratio <= rep.bound


def test_worker_count(monkeypatch):
    monkeypatch.setenv("THETA_SPANNER_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("THETA_SPANNER_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.delenv("THETA_SPANNER_THREADS")
    assert worker_count() >= 1


def test_search_reaches_fixture_level():
    res = adversarial_search(family_of(6), seed=0, iterations=10_000)
    inst, ratio = res
    assert ratio >= 1.9
    assert ratio <= spanning_ratio_bound(6) + 1e-9
    assert not res.violation
    assert pair_ratio_report(inst, 6).max_ratio == pytest.approx(ratio)


@pytest.mark.parametrize("m", [7, 8, 9])
def test_search_stays_below_bound(m):
    res = adversarial_search(m, seed=1, iterations=300)
    assert 1 <= res.ratio <= res.bound + 1e-9 and not res.violation


def test_search_deterministic():
    a = adversarial_search(7, seed=4, iterations=120)
    b = adversarial_search(7, seed=4, iterations=120)
    assert a.ratio == b.ratio and a.instance == b.instance


def test_constraints_never_lower_search_result():
    for seed in range(3):
        free = adversarial_search(7, seed=seed, iterations=200, restarts=2)
        cons = adversarial_search(7, seed=seed, iterations=200, restarts=2, max_constraints=3)
        assert cons.ratio >= free.ratio
        assert cons.ratio <= cons.bound + 1e-9


def test_spanning_chain_cases():
    count = 0
    for m in ALL_M:
        spec = family_of(m)
        inst = make_instance(m, 0, n=30, n_constraints=10)
        for case in spanning_chain_cases(inst, spec):
            count += 1
            assert case.chain.vertices[0] == case.v0 and case.chain.vertices[-1] == case.w
            assert verify_chain(inst, case.chain)
            assert list(case.types) == sorted(case.types)
            # the frame puts w in cone 0 of u with v0 on the left
            fu, fw, fv = case.frame_coords[case.u], case.frame_coords[case.w], case.frame_coords[case.v0]
            assert abs(math.atan2(fw[0] - fu[0], fw[1] - fu[1])) < spec.theta / 2
            assert (fw[0] - fu[0]) * (fv[1] - fu[1]) - (fw[1] - fu[1]) * (fv[0] - fu[0]) > 0
            y0 = fv[1]
            assert all(case.frame_coords[p][1] > y0 for p in case.chain.vertices[1:])
    assert count > 100
