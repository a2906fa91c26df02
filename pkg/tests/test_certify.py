from __future__ import annotations

import pytest
from hypothesis import given

from helpers import networks
from skewflow.certify import (
    BudgetExceeded,
    OracleBudget,
    oracle_good_pair_exists,
    oracle_max_isflow,
    oracle_max_matching,
    oracle_rdist,
    oracle_rpath,
    verify_isflow,
    verify_odd_barrier,
    weak_duality_holds,
)
from skewflow.blockphase import MBPInstance
from skewflow.reductions import MatchingInstance, matching_to_network
from skewflow.solvers import max_isflow_augmenting, max_isflow_sbfm
from skewflow.ssgraph import ISFlow, OddBarrier, SkewSymmetricNetwork, build_split_graph


def _path_net() -> SkewSymmetricNetwork:
    return SkewSymmetricNetwork.from_pairs(4, [(0, 2, 2), (2, 1, 1)])


def test_verify_isflow_accepts_feasible_flow():
    net = _path_net()
    assert verify_isflow(net, ISFlow.from_values(net, [1, 1, 1, 1])) == []


def test_verify_isflow_flags_asymmetry():
    net = _path_net()
    f = ISFlow((1, 0, 1, 1), 1)
    assert any("asymmetric" in p for p in verify_isflow(net, f))


def test_verify_isflow_names_overloaded_arc():
    net = _path_net()
    f = ISFlow((2, 2, 2, 2), 2)
    problems = verify_isflow(net, f)
    assert any(p.startswith("arc 2:") and "exceeds" in p for p in problems)


def test_verify_isflow_flags_wrong_recorded_value():
    net = _path_net()
    assert any("recorded value" in p for p in verify_isflow(net, ISFlow((1, 1, 1, 1), 3)))


def test_trivial_barrier_has_cut_capacity():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 3), (4, 2, 1)])
    barrier = OddBarrier(frozenset({0}), (), 3)
    assert verify_odd_barrier(net, barrier).ok
    # the mate of an arc into the sink leaves the source
    wider = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 3), (2, 1, 2)])
    assert verify_odd_barrier(wider, OddBarrier(frozenset({0}), (), 5)).ok


def test_k3_certificate(k3):
    net = matching_to_network(k3)[0].net
    rep = max_isflow_sbfm(net)
    assert rep.value == 2
    assert len(rep.certificate.X) == 1
    assert rep.certificate.capacity == 2
    assert verify_odd_barrier(net, rep.certificate).ok


def test_even_crossing_capacity_violates_o4():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 2), (2, 3, 1)])
    barrier = OddBarrier(frozenset({0}), (frozenset({2, 3}),), 1)
    verdict = verify_odd_barrier(net, barrier)
    assert not verdict.ok and verdict.violation.startswith("(O4)")


def test_barrier_with_wrong_capacity_is_rejected():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 1), (2, 3, 1)])
    good = OddBarrier(frozenset({0}), (frozenset({2, 3}),), 0)
    assert verify_odd_barrier(net, good).ok
    assert not verify_odd_barrier(net, OddBarrier(good.A, good.X, 1)).ok


def test_barrier_with_a_meeting_its_mates_violates_o2():
    net = _path_net()
    verdict = verify_odd_barrier(net, OddBarrier(frozenset({0, 2, 3}), (), 0))
    assert verdict.violation.startswith("(O2)")


def test_oracle_rpath_single_route():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 1), (2, 5, 1), (5, 1, 1)])
    assert oracle_rpath(net)
    # route 0 -> 2 -> 5 -> 1, with arc (4, 3) as the mate of (2, 5)
    assert oracle_rdist(net) == 3


def test_oracle_rpath_barrier_instance():
    # the only route uses an arc and its mate
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 3, 1)])
    assert not oracle_rpath(net)
    assert oracle_rdist(net) is None


def test_oracle_rpath_in_split_graph_with_capacity_two():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 2), (2, 3, 1)])
    assert not oracle_rpath(net)
    split = build_split_graph(net)
    assert oracle_rpath(split.graph)
    assert oracle_rdist(split.graph) == 3


def test_oracle_matching_examples(five_node, k3):
    assert oracle_max_matching(five_node) == 2
    assert oracle_max_isflow(matching_to_network(five_node)[0].net) == 4
    assert oracle_max_matching(k3) == 1
    assert oracle_max_matching(MatchingInstance.simple(4, [])) == 0


def test_oracle_matching_with_bounds():
    inst = MatchingInstance(3, ((0, 1), (1, 2)), ((1, 1), (0, None)), ((0, 1), (0, 3), (0, 2)))
    assert oracle_max_matching(inst) == 3
    infeasible = MatchingInstance(2, ((0, 1),), ((2, 2),), ((0, 1), (0, 1)))
    assert oracle_max_matching(infeasible) is None


def test_oracle_budget_is_enforced():
    big = SkewSymmetricNetwork.from_pairs(30, [(0, 2, 1)])
    with pytest.raises(BudgetExceeded):
        oracle_max_isflow(big)
    many = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1)] * 13)
    assert not oracle_rpath(many)
    with pytest.raises(BudgetExceeded):
        oracle_rpath(many, OracleBudget(max_arcs=5))


def test_good_pair_oracle():
    inst = MBPInstance(4, (0, 1, 2), (2, 2, 3), 3, ((0, 1),))
    assert not oracle_good_pair_exists(inst)
    assert oracle_good_pair_exists(inst, [1, 1, 2])


@given(networks())
def test_weak_duality_across_flows_and_barriers(net):
    flows = [ISFlow.zero(net), max_isflow_augmenting(net.with_caps([c // 2 for c in net.cap])).flow]
    flows = [ISFlow.from_values(net, f.values) for f in flows]
    barriers = [max_isflow_augmenting(net).certificate, OddBarrier(frozenset({0}), (), sum(net.cap[a] for a in net.out_arcs[0]))]
    assert weak_duality_holds(net, flows, barriers)
