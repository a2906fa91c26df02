from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given

from helpers import graphs
from skewflow.certify import oracle_max_isflow, oracle_max_matching
from skewflow.reductions import (
    BoundedNetwork,
    MatchingInstance,
    eliminate_lower_bounds,
    flow_to_matching,
    matching_to_network,
    node_pair,
    solve_bounded,
    solve_matching,
    unit_split,
)
from skewflow.solvers import max_isflow_augmenting, max_isflow_sbfm
from skewflow.ssgraph import ISFlow, SkewSymmetricNetwork, validate_network


def _nx_matching_size(inst: MatchingInstance) -> int:
    g = nx.Graph()
    g.add_nodes_from(range(inst.node_count))
    g.add_edges_from(e for e in inst.edges if e[0] != e[1])
    return len(nx.max_weight_matching(g, maxcardinality=True))


def test_five_node_network_shape(five_node):
    bounded, bm = matching_to_network(five_node)
    assert bounded.net.node_count == 12
    assert bounded.net.arc_count == 20
    assert not bounded.has_lower
    assert validate_network(bounded.net) == []
    assert node_pair(0) == (2, 3)


def test_five_node_matching(five_node):
    res = solve_matching(five_node, max_isflow_sbfm)
    assert res.size == 2
    assert res.flow.value == 4
    chosen = {five_node.edges[i] for i, h in enumerate(res.values) if h}
    assert chosen == {(1, 2), (3, 4)}


@given(graphs())
def test_matching_size_matches_networkx(inst):
    res = solve_matching(inst, max_isflow_sbfm)
    assert res.size == _nx_matching_size(inst)
    assert all(d <= 1 for d in inst.degrees(res.values))
    assert res.flow.value == 2 * res.size


def _bounded_instance(rng: random.Random) -> MatchingInstance:
    n = rng.randint(2, 6)
    edges, ebounds = [], []
    for _ in range(rng.randint(1, 7)):
        v, w = rng.randrange(n), rng.randrange(n)
        lo = rng.choice([0, 0, 0, 1])
        hi = rng.choice([None, lo + rng.randint(0, 2)])
        edges.append((v, w))
        ebounds.append((lo, hi))
    nbounds = []
    for _ in range(n):
        lo = rng.choice([0, 0, 1])
        nbounds.append((lo, lo + rng.randint(0, 3)))
    return MatchingInstance(n, tuple(edges), tuple(ebounds), tuple(nbounds))


def test_bounded_matchings_agree_with_oracle():
    rng = random.Random(11)
    infeasible = 0
    for _ in range(300):
        inst = _bounded_instance(rng)
        expected = oracle_max_matching(inst)
        res = solve_matching(inst, max_isflow_sbfm)
        if expected is None:
            infeasible += 1
            assert not res.feasible
            continue
        assert res.feasible and res.size == expected
        for (lo, hi), h in zip(inst.edge_bounds, res.values):
            assert lo <= h and (hi is None or h <= hi)
        for (lo, hi), d in zip(inst.node_bounds, inst.degrees(res.values)):
            assert lo <= d <= hi
    # the sample must exercise both outcomes
    assert 0 < infeasible < 300


def test_loop_counts_twice_toward_degree():
    inst = MatchingInstance(1, ((0, 0),), ((0, None),), ((0, 4),))
    res = solve_matching(inst, max_isflow_augmenting)
    assert res.values == (2,)
    assert inst.degrees(res.values) == [4]


def test_matching_instance_rejects_bad_bounds():
    with pytest.raises(ValueError):
        MatchingInstance(2, ((0, 1),), ((2, 1),))
    with pytest.raises(ValueError):
        MatchingInstance(2, ((0, 5),))
    with pytest.raises(ValueError):
        MatchingInstance(2, ((0, 1),), (), ((0, 1),))


def test_eliminate_lower_bounds_reads_back_flow():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 3), (2, 4, 2), (4, 1, 3)])
    bounded = BoundedNetwork(net, (0, 0, 1, 1, 0, 0))
    red = eliminate_lower_bounds(bounded)
    assert validate_network(red.net) == []
    assert len(red.extra) == 4
    f = solve_bounded(bounded, max_isflow_augmenting)
    assert f is not None and f.value == oracle_max_isflow(net)
    assert f.values[2] >= 1


def test_lower_bound_that_cannot_be_met():
    # arc (2, 3) carries flow only back into its own mate, so no flow can use it
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 3, 1)])
    assert solve_bounded(BoundedNetwork(net, (0, 0, 1, 1)), max_isflow_augmenting) is None


def test_bounded_network_rejects_asymmetric_lower_bounds():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1)])
    with pytest.raises(ValueError):
        BoundedNetwork(net, (1, 0))
    with pytest.raises(ValueError):
        BoundedNetwork(net, (2, 2))


def test_unit_split_preserves_value():
    rng = random.Random(5)
    for _ in range(40):
        n = 2 * rng.randint(1, 4)
        pairs = [(rng.randrange(n), rng.randrange(n), rng.randint(1, 3)) for _ in range(rng.randint(0, 6))]
        net = SkewSymmetricNetwork.from_pairs(n, pairs)
        split = unit_split(net)
        assert set(split.net.cap) <= {1}
        g = max_isflow_augmenting(split.net).flow
        folded = split.fold(g, net)
        assert folded.value == oracle_max_isflow(net)


def test_unit_split_rejects_huge_capacity():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 50)])
    with pytest.raises(ValueError):
        unit_split(net, limit=10)


def test_flow_to_matching_reads_edge_arcs(k3):
    bounded, bm = matching_to_network(k3)
    f = max_isflow_sbfm(bounded.net).flow
    values = flow_to_matching(f, bm)
    assert sum(values) == 1
    assert isinstance(f, ISFlow)
