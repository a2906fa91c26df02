from __future__ import annotations

import pytest
from hypothesis import given

from helpers import networks
from skewflow.decompose import symmetric_decomposition
from skewflow.solvers import max_isflow_augmenting
from skewflow.ssgraph import (
    ISFlow,
    SkewSymmetricNetwork,
    build_split_graph,
    flow_violations,
    h_capacity,
    infinity_sentinel,
    is_regular,
    lift_regular_path,
    mate_node,
    path_nodes,
    require_valid,
    residual,
    superpose,
    validate_network,
)


def test_mate_node_is_an_involution_without_fixed_points():
    for v in range(20):
        assert mate_node(v) != v
        assert mate_node(mate_node(v)) == v
    assert mate_node(0) == 1


def test_from_pairs_builds_mates_by_construction():
    net = SkewSymmetricNetwork.from_pairs(6, [(0, 2, 3), (2, 5, 1)])
    assert net.arc_count == 4
    assert net.arc(1) == (3, 1, 3)
    assert net.mate == (1, 0, 3, 2)
    assert validate_network(net) == []


def test_validate_network_reports_broken_mate_rule():
    net = SkewSymmetricNetwork(4, (0, 3), (2, 1), (1, 1), (1, 0))
    assert validate_network(net) == []
    broken = SkewSymmetricNetwork(4, (0, 2), (2, 1), (1, 1), (1, 0))
    assert any("swap-and-mate" in p for p in validate_network(broken))
    with pytest.raises(ValueError):
        require_valid(broken)


def test_validate_network_reports_fixed_point_and_asymmetric_capacity():
    fixed = SkewSymmetricNetwork(2, (0,), (1,), (1,), (0,))
    assert any("fixed point" in p for p in validate_network(fixed))
    uneven = SkewSymmetricNetwork(4, (0, 3), (2, 1), (1, 2), (1, 0))
    assert any("asymmetric" in p for p in validate_network(uneven))
    odd = SkewSymmetricNetwork(3, (), (), (), ())
    assert validate_network(odd)


@given(networks())
def test_generated_networks_are_valid(net):
    assert validate_network(net) == []
    for a in range(net.arc_count):
        b = net.mate[a]
        assert (net.tail[b], net.head[b]) == (net.head[a] ^ 1, net.tail[a] ^ 1)


def test_flow_violations_detect_each_kind():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 1, 1)])
    assert flow_violations(net, [1, 1, 1, 1]) == []
    assert any("asymmetric" in p for p in flow_violations(net, [1, 0, 1, 1]))
    assert any("outside" in p for p in flow_violations(net, [2, 2, 2, 2]))
    assert any("conservation" in p for p in flow_violations(net, [1, 1, 0, 0]))


def test_residual_reverse_arcs_are_offset_by_m():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 2), (2, 1, 1)])
    f = ISFlow.from_values(net, [1, 1, 1, 1])
    res = residual(net, f)
    m = net.arc_count
    assert res.graph.arc_count == 2 * m
    for a in range(m):
        assert (res.graph.tail[a + m], res.graph.head[a + m]) == (net.head[a], net.tail[a])
        assert res.graph.cap[a] == net.cap[a] - f[a]
        assert res.graph.cap[a + m] == f[a]
        assert res.original_arc(a + m) == (a, True)
    assert validate_network(res.graph) == []


def test_superpose_cancels_opposite_flow():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 1, 1)])
    f = ISFlow.from_values(net, [1, 1, 1, 1])
    m = net.arc_count
    # push the flow back along the reverse arcs
    g = [0] * m + [1] * m
    out = superpose(net, f, g)
    assert out.values == (0, 0, 0, 0)
    assert out.value == 0


@given(networks())
def test_superpose_adds_values(net):
    half = net.with_caps([c // 2 for c in net.cap])
    f = ISFlow.from_values(net, max_isflow_augmenting(half).flow.values)
    res = residual(net, f)
    g = max_isflow_augmenting(res.graph).flow
    out = superpose(net, f, g.values)
    assert flow_violations(net, out.values) == []
    assert out.value == f.value + g.value


def test_split_graph_halves_capacities():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 3), (2, 1, 1)])
    split = build_split_graph(net)
    assert split.graph.cap[split.first[0]] == 2
    assert split.graph.cap[split.second[0]] == 1
    assert split.second[2] == -1
    assert split.graph.arc_count == 6
    assert validate_network(split.graph) == []
    assert [split.omega[e] for e in (split.first[0], split.second[0])] == [0, 0]


def test_split_graph_rejects_bad_capacity_vectors():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 3)])
    with pytest.raises(ValueError):
        build_split_graph(net, [1, 2])
    with pytest.raises(ValueError):
        build_split_graph(net, [-1, -1])


def test_h_capacity_halves_arcs_used_with_their_mate():
    # s -> 2 -> 3 -> s' uses arc 0 and its mate 1
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 5), (2, 3, 3)])
    path = [0, 2, 1]
    assert path_nodes(net, path) == [0, 2, 3, 1]
    assert not is_regular(net, path)
    assert h_capacity(net, net.cap, path) == 2
    plain = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 5), (2, 1, 4)])
    assert is_regular(plain, [0, 2])
    assert h_capacity(plain, plain.cap, [0, 2]) == 4


def test_lift_regular_path_example():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 5), (2, 3, 3)])
    split = build_split_graph(net)
    lifted = lift_regular_path(split, [0, 2, 1])
    assert is_regular(split.graph, lifted)
    assert [split.omega[e] for e in lifted] == [0, 2, 1]
    assert lifted[0] == split.first[0] and lifted[2] == split.second[1]


def test_lift_rejects_non_h_regular_path():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1)])
    split = build_split_graph(net)
    with pytest.raises(ValueError):
        lift_regular_path(split, [0, 1])


@given(networks(max_cap=4))
def test_lift_roundtrip_on_decomposition_members(net):
    f = max_isflow_augmenting(net).flow
    if f.value == 0 and not any(f.values):
        return
    member = symmetric_decomposition(net, f).members[0]
    split = build_split_graph(net, f.values)
    lifted = lift_regular_path(split, member.arcs)
    assert is_regular(split.graph, lifted)
    assert [split.omega[e] for e in lifted] == list(member.arcs)


def _simple_walks(net: SkewSymmetricNetwork, limit: int):
    """All simple paths and cycles with at most ``limit`` arcs."""
    out = []

    def grow(arcs, nodes):
        out.append(list(arcs))
        if len(arcs) == limit:
            return
        for a in net.out_arcs[nodes[-1]]:
            y = net.head[a]
            if y == nodes[0] or y not in nodes:
                arcs.append(a)
                nodes.append(y)
                if y == nodes[0]:
                    out.append(list(arcs))
                else:
                    grow(arcs, nodes)
                arcs.pop()
                nodes.pop()

    for a in range(net.arc_count):
        x, y = net.tail[a], net.head[a]
        if x == y:
            out.append([a])
        else:
            grow([a], [x, y])
    return out


@given(networks(max_pairs=5, max_arc_pairs=7))
def test_no_self_symmetric_simple_path_or_cycle(net):
    for walk in _simple_walks(net, 6):
        image = [net.mate[a] for a in reversed(walk)]
        closed = net.head[walk[-1]] == net.tail[walk[0]]
        rotations = [walk[i:] + walk[:i] for i in range(len(walk))] if closed else [walk]
        assert image not in rotations


def test_infinity_sentinel_exceeds_every_finite_sum():
    assert infinity_sentinel([1, 2, 3]) == 7
    assert infinity_sentinel([]) == 1
