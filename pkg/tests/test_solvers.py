from __future__ import annotations

import math
import random

import pytest
from hypothesis import given

from helpers import networks, small_network
from skewflow.certify import oracle_max_isflow, verify_isflow, verify_odd_barrier
from skewflow.generators import generate
from skewflow.reductions import matching_to_network
from skewflow.solvers import (
    SOLVERS,
    max_flow_dinic,
    max_isflow_anstee,
    max_isflow_sbfm,
    transit_capacity,
)
from skewflow.ssgraph import SkewSymmetricNetwork

# values from the brute-force oracle, frozen for seeds 0..11
SEEDED_PARAMS: dict[str, int] = {}
SEEDED_VALUES = [2, 2, 4, 6, 0, 6, 0, 2, 2, 2, 0, 6]


def _check(net: SkewSymmetricNetwork, rep) -> None:
    assert verify_isflow(net, rep.flow) == []
    assert verify_odd_barrier(net, rep.certificate).ok
    assert rep.certificate.capacity == rep.value


@pytest.mark.parametrize("name", sorted(SOLVERS))
def test_solvers_match_oracle_on_random_networks(name):
    solve = SOLVERS[name]
    rng = random.Random(20 + len(name))
    for _ in range(150):
        net = small_network(rng)
        rep = solve(net)
        assert rep.value == oracle_max_isflow(net)
        _check(net, rep)


@pytest.mark.parametrize("name", sorted(SOLVERS))
def test_solvers_on_frozen_seeded_instances(name):
    for seed, expected in enumerate(SEEDED_VALUES):
        net = generate("random-ssf", SEEDED_PARAMS, seed=seed)
        assert SOLVERS[name](net).value == expected


@given(networks(max_cap=5))
def test_all_solvers_agree(net):
    reps = {name: solve(net) for name, solve in SOLVERS.items()}
    assert len({r.value for r in reps.values()}) == 1
    for rep in reps.values():
        _check(net, rep)


def test_k3_stages(k3):
    net = matching_to_network(k3)[0].net
    rep = max_isflow_anstee(net)
    assert rep.value == 2
    assert rep.stages["max_flow"] == 3
    assert rep.stages["self_symmetric_cycles"] == 1
    assert rep.stages["after_repair"] == 2
    for name, solve in SOLVERS.items():
        other = solve(net)
        assert other.value == 2 and other.certificate.capacity == 2


def test_sbfm_rdists_increase_within_bound():
    rng = random.Random(8)
    for _ in range(200):
        net = small_network(rng, max_cap=4)
        rep = max_isflow_sbfm(net)
        assert all(a < b for a, b in zip(rep.rdists, rep.rdists[1:]))
        bound = min(net.node_count - 1, math.isqrt(4 * transit_capacity(net)) + 1)
        assert rep.iterations == len(rep.rdists) <= bound


def test_k3_rdists(k3):
    net = matching_to_network(k3)[0].net
    assert SOLVERS["sbfm"](net).rdists == [3]
    assert SOLVERS["sapm"](net).rdists == [3]


def test_transit_capacity_counts_inner_nodes():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 3), (2, 1, 1)])
    # node 2 has in 3 and out 1, node 3 mirrors it
    assert transit_capacity(net) == 2


def test_dinic_on_plain_digraph():
    g = max_flow_dinic(4, (0, 0, 1, 2, 1), (1, 2, 3, 3, 2), (3, 2, 2, 3, 1), 0, 3)
    assert g[2] + g[3] == 5


def test_solvers_reject_invalid_network():
    broken = SkewSymmetricNetwork(4, (0, 2), (2, 1), (1, 1), (1, 0))
    for solve in SOLVERS.values():
        with pytest.raises(ValueError):
            solve(broken)
