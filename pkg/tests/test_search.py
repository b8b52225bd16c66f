from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgen import complete_graph, connected_nets, loop4, make_net
from oracles import spanning_forests
from radkit.harness import load_system
from radkit.netmodel import Branch, Bus, Network, to_per_unit
from radkit.powerflow import evaluate_losses
from radkit.search import (
    BudgetExceeded,
    SearchError,
    enumerate_radial,
    exchange_moves,
    fixed_branches,
    iter_radial_configurations,
    local_search_branch_exchange,
    multistart,
    random_spanning_forest,
)
from radkit.topology import Configuration, count_spanning_trees, is_radial


@pytest.fixture(scope="module")
def exact33():
    return enumerate_radial(load_system("33bus"))


@pytest.fixture(scope="module")
def exact14():
    return enumerate_radial(load_system("14bus"))


def test_loop_enumerates_four():
    net = loop4()
    cfgs = list(iter_radial_configurations(net))
    assert len(cfgs) == 4
    assert sorted(c.open_indices for c in cfgs) == [[0], [1], [2], [3]]
    assert enumerate_radial(net).trees_enumerated == 4


@pytest.mark.parametrize("n", [4, 5])
def test_complete_graph_counts(n):
    assert enumerate_radial(complete_graph(n)).trees_enumerated == n ** (n - 2)


def test_33bus_exact(exact33):
    net = load_system("33bus")
    assert exact33.best_losses_kw == pytest.approx(139.55, rel=5e-3)
    assert exact33.trees_enumerated == count_spanning_trees(net)
    assert exact33.mode == "exact" and is_radial(net, exact33.best_cfg)


def test_14bus_exact_target(exact14):
    assert exact14.best_losses_kw == pytest.approx(605.92, rel=5e-3)


def test_14bus_exact_baseline(exact14):
    assert exact14.best_losses_kw == pytest.approx(466.1267332440038, rel=1e-9)
    assert exact14.best_cfg.open_indices == [6, 7, 15]
    assert exact14.trees_enumerated == count_spanning_trees(load_system("14bus"))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as info:
        enumerate_radial(load_system("33bus"), max_trees=1000)
    assert info.value.count == 50751 and info.value.budget == 1000


def test_hard_limits_without_feasible_tree():
    buses = [Bus(1, 0, 0, 1, 1, True)] + [Bus(i, 500.0, 300.0, 0.9999, 1.05) for i in (2, 3, 4)]
    net = Network(tuple(buses), tuple(Branch(a, b, 0.5, 0.4, 1000.0) for a, b in [(1, 2), (2, 3), (3, 4), (4, 1)]), 10, 10)
    with pytest.raises(SearchError):
        enumerate_radial(net, hard_limits=True)
    assert math.isfinite(enumerate_radial(net).best_losses_kw)


def test_fixed_branches_respected():
    branches = [Branch(1, 2, 0.5, 0.4, 1000.0, False, True), Branch(2, 3, 0.5, 0.4, 1000.0),
                Branch(3, 4, 0.5, 0.4, 1000.0), Branch(4, 1, 0.5, 0.4, 1000.0, False, False)]
    base = loop4()
    net = Network(base.buses, tuple(branches), 10, 10)
    assert fixed_branches(net) == ([0], [3])
    cfgs = list(iter_radial_configurations(net))
    assert len(cfgs) == count_spanning_trees(net, [0], [3]) == 1
    assert all(c.closed[0] and not c.closed[3] for c in cfgs)


def test_local_search_at_optimum(exact33):
    net = load_system("33bus")
    report = local_search_branch_exchange(net, start=exact33.best_cfg)
    assert report.best_cfg == exact33.best_cfg
    assert len(report.trace) == 1


def test_local_search_descends():
    net = load_system("33bus")
    initial = evaluate_losses(net, Configuration.initial(net))
    report = local_search_branch_exchange(net)
    assert report.best_losses_kw <= initial
    losses = [t["losses_kw"] for t in report.trace]
    assert all(b < a for a, b in zip(losses, losses[1:]))


def test_local_search_136bus():
    report = local_search_branch_exchange(load_system("136bus"))
    assert report.best_losses_kw == pytest.approx(280.14, rel=0.02)


def test_local_search_rejects_non_radial_start():
    net = load_system("33bus")
    with pytest.raises(SearchError):
        local_search_branch_exchange(net, start=Configuration.all_closed(net))


def test_multistart_deterministic():
    net = load_system("33bus")
    a = multistart(net, n_starts=1, seed=4)
    b = multistart(net, n_starts=1, seed=4)
    assert a.best_cfg == b.best_cfg and a.best_losses_kw == b.best_losses_kw and a.trace == b.trace


def test_multistart_finds_33bus_optimum(exact33):
    report = multistart(load_system("33bus"), n_starts=20, seed=0)
    assert report.best_losses_kw == pytest.approx(139.55, rel=5e-3)
    assert report.best_losses_kw >= exact33.best_losses_kw - 1e-9


def test_multistart_never_beats_exact(exact14):
    for seed in range(3):
        assert multistart(load_system("14bus"), n_starts=3, seed=seed).best_losses_kw >= exact14.best_losses_kw - 1e-9


def test_multistart_needs_a_start():
    with pytest.raises(ValueError):
        multistart(load_system("33bus"), n_starts=0)


def test_report_to_dict(exact33):
    doc = json.loads(json.dumps(exact33.to_dict(load_system("33bus"))))
    assert [b["number"] for b in doc["open_branches"]] == [7, 9, 14, 32, 37]
    assert doc["trees_enumerated"] == 50751 and len(doc["closed"]) == 37


def test_random_spanning_forest_two_substations():
    net = make_net(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 5), (1, 6)], subs=(1, 6))
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert is_radial(net, random_spanning_forest(net, rng))


@given(connected_nets(max_buses=7, max_edges=11))
@settings(max_examples=60, deadline=None)
def test_enumeration_is_the_radial_set(net):
    cfgs = list(iter_radial_configurations(net))
    assert len(cfgs) == len(set(cfgs))
    assert set(cfgs) == spanning_forests(net)
    assert len(cfgs) == count_spanning_trees(net)


@given(connected_nets(max_buses=8, max_edges=14), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_exchange_moves_preserve_radiality(net, seed):
    pu = to_per_unit(net)
    cfg = random_spanning_forest(pu, np.random.default_rng(seed))
    assert is_radial(pu, cfg)
    seen = set()
    for move, nxt in exchange_moves(pu, cfg):
        assert not cfg.closed[move.close] and cfg.closed[move.open]
        assert nxt.closed[move.close] and not nxt.closed[move.open]
        assert sum(a != b for a, b in zip(cfg.closed, nxt.closed)) == 2
        assert is_radial(pu, nxt)
        seen.add(nxt)
    # every radial neighbour at swap distance one is generated
    expected = {
        f for f in spanning_forests(pu) if sum(a != b for a, b in zip(cfg.closed, f.closed)) == 2
    }
    assert seen == expected
