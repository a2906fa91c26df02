from __future__ import annotations

import pytest
from hypothesis import given

from helpers import networks
from skewflow.decompose import crossing_parity, symmetric_decomposition
from skewflow.solvers import max_isflow_sbfm
from skewflow.ssgraph import ISFlow, SkewSymmetricNetwork, is_regular


@given(networks(max_cap=4))
def test_decomposition_recomposes_flow(net):
    f = max_isflow_sbfm(net).flow
    dec = symmetric_decomposition(net, f)
    assert dec.recompose(net) == list(f.values)
    assert len(dec) <= net.arc_count
    for mem in dec.members:
        assert mem.delta > 0
        assert mem.mate_arcs == tuple(net.mate[a] for a in reversed(mem.arcs))
        nodes = mem.nodes(net)
        if mem.closed:
            assert nodes[0] == nodes[-1]
        else:
            assert (nodes[0], nodes[-1]) == (0, 1)
        if not is_regular(net, mem.arcs):
            # an arc used together with its mate needs room for both units
            doubled = [a for a in mem.arcs if net.mate[a] in mem.arcs]
            assert all(2 * mem.delta <= f.values[a] for a in doubled)


def test_symmetric_cycle_pair():
    # two mate cycles 2 -> 4 -> 2 and 5 -> 3 -> 5
    net = SkewSymmetricNetwork.from_pairs(6, [(2, 4, 1), (4, 2, 1)])
    f = ISFlow((1, 1, 1, 1), 0)
    dec = symmetric_decomposition(net, f)
    assert len(dec) == 1 and dec.members[0].closed


def test_decomposition_rejects_infeasible_flow():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 1, 1)])
    with pytest.raises(ValueError):
        symmetric_decomposition(net, ISFlow((1, 1, 0, 0), 1))


@given(networks(max_cap=4))
def test_crossing_flow_of_self_symmetric_set(net):
    f = max_isflow_sbfm(net).flow
    inner = set(range(2, net.node_count, 2)) | set(range(3, net.node_count, 2))
    into, out = crossing_parity(net, f, inner)
    # conservation at every inner node makes in and out equal
    assert into == out
    everything = set(range(net.node_count))
    assert crossing_parity(net, f, everything) == (0, 0)


def test_crossing_parity_needs_symmetric_set():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1)])
    with pytest.raises(ValueError):
        crossing_parity(net, ISFlow.zero(net), {2})
