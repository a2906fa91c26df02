from __future__ import annotations

import numpy as np

import networkx as nx
import pytest
from hypothesis import given

from helpers import graphs
from skewflow.compress import (
    Clique,
    CliquePartition,
    compress_matching,
    decompress_flow,
    delta_clique_sizes,
    symmetric_clique_partition,
)
from skewflow.generators import dense_graph, generate
from skewflow.reductions import MatchingInstance
from skewflow.solvers import max_isflow_sbfm
from skewflow.certify import verify_isflow


def _nx_size(inst: MatchingInstance) -> int:
    g = nx.Graph()
    g.add_edges_from(e for e in inst.edges if e[0] != e[1])
    return len(nx.max_weight_matching(g, maxcardinality=True))


def test_delta_clique_sizes():
    assert delta_clique_sizes(256, 65536, 0.25) == (64, 2)
    with pytest.raises(ValueError):
        delta_clique_sizes(10, 5, 0.5)
    with pytest.raises(ValueError):
        delta_clique_sizes(10, 101, 0.25)


def test_partition_check_catches_errors():
    arcs = [(0, 1), (1, 0)]
    CliquePartition(2, (Clique((0,), (1,)), Clique((1,), (0,)))).check(arcs)
    with pytest.raises(ValueError):
        CliquePartition(2, (Clique((0,), (1,)),)).check(arcs)
    with pytest.raises(ValueError):
        CliquePartition(2, (Clique((0,), (1,)), Clique((0,), (1,)))).check(arcs)
    with pytest.raises(ValueError):
        CliquePartition(3, (Clique((0,), (1, 2)), Clique((1, 2), (0,)))).check(arcs)


def test_partition_rejects_loops_and_asymmetric_sets():
    with pytest.raises(ValueError):
        symmetric_clique_partition(3, [(1, 1)])
    with pytest.raises(ValueError):
        symmetric_clique_partition(3, [(0, 1)])


def test_dense_graph_partition_covers_all_arcs():
    inst = dense_graph(np.random.default_rng(0), 40)
    arcs = [(v, w) for v, w in inst.edges] + [(w, v) for v, w in inst.edges]
    part = symmetric_clique_partition(inst.node_count, arcs)
    part.check(arcs)
    assert any(c.arc_count > 1 for c in part.cliques)


@pytest.mark.parametrize("seed", range(4))
def test_compression_preserves_value_on_dense_graphs(seed):
    inst = generate("dense", {"n": 48}, seed=seed)
    st = compress_matching(inst)
    assert st.net.arc_count < st.original.arc_count
    g = max_isflow_sbfm(st.net).flow
    f = decompress_flow(g, st)
    assert verify_isflow(st.original, f) == []
    assert f.value == max_isflow_sbfm(st.original).value == 2 * _nx_size(inst)


@given(graphs(max_nodes=10, max_edges=30))
def test_compression_keeps_matching_size(inst):
    st = compress_matching(inst, delta=0.4)
    f = decompress_flow(max_isflow_sbfm(st.net).flow, st)
    assert f.value == 2 * _nx_size(inst)


def test_compression_refuses_bounded_instances():
    with pytest.raises(ValueError):
        compress_matching(MatchingInstance(2, ((0, 1),), ((0, 2),)))
