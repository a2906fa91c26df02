from __future__ import annotations

import random

import pytest

from helpers import small_mbp
from skewflow.blockphase import (
    MBPInstance,
    check_mbp_instance,
    solve_bbf,
    solve_mbp,
    to_mbp_instance,
    totally_blocking_isflow,
)
from skewflow.certify import oracle_good_pair_exists, oracle_rpath, verify_isflow
from skewflow.ssgraph import SkewSymmetricNetwork, build_split_graph


def _check_pairs(inst: MBPInstance, paths) -> list[int]:
    ends = {frozenset(pair) for pair in inst.pairs}
    for p in paths.pairs:
        assert p.weight > 0
        for route in (p.first, p.second):
            assert inst.head[route[-1]] == inst.sink
            for e, f in zip(route, route[1:]):
                assert inst.head[e] == inst.tail[f]
        z, zm = inst.tail[p.first[0]], inst.tail[p.second[0]]
        assert frozenset((z, zm)) in ends
    load = paths.load(inst)
    assert all(w <= c for w, c in zip(load, inst.cap))
    return [c - w for c, w in zip(inst.cap, load)]


def test_mbp_is_maximal_on_random_instances():
    rng = random.Random(31)
    nonempty = 0
    for _ in range(300):
        inst = small_mbp(rng)
        paths = solve_mbp(inst)
        room = _check_pairs(inst, paths)
        assert not oracle_good_pair_exists(inst, room)
        nonempty += bool(len(paths))
    assert nonempty > 100


def test_bbf_leaves_no_good_pair():
    rng = random.Random(32)
    for _ in range(300):
        inst = small_mbp(rng, capmax=4)
        room = _check_pairs(inst, solve_bbf(inst))
        assert not oracle_good_pair_exists(inst, room)


def test_mbp_shared_arc_blocks_second_pair():
    # both pairs must pass through arc 4 -> 5 into the sink 6
    inst = MBPInstance(7, (0, 1, 2, 3, 4), (4, 4, 4, 4, 6), 6, ((0, 1), (2, 3)))
    assert len(solve_mbp(inst)) == 0
    wide = MBPInstance(7, (0, 1, 4, 4), (4, 4, 6, 6), 6, ((0, 1),))
    out = solve_mbp(wide)
    assert len(out) == 1 and sorted(out.load(wide)) == [1, 1, 1, 1]


def test_check_mbp_instance_rejects_bad_input():
    with pytest.raises(ValueError):
        check_mbp_instance(MBPInstance(3, (0, 1), (1, 0), 2, ((0, 1),)))
    with pytest.raises(ValueError):
        check_mbp_instance(MBPInstance(4, (0,), (3,), 3, ((0, 0),)))
    with pytest.raises(ValueError):
        check_mbp_instance(MBPInstance(4, (2,), (1,), 3, ((0, 1),)))
    with pytest.raises(ValueError):
        check_mbp_instance(MBPInstance(4, (0,), (3,), 3, ((0, 1),), (0,)))


def _acyclic_network(rng: random.Random) -> SkewSymmetricNetwork:
    # antisymmetric potentials make every arc and its mate point uphill
    pairs_count = rng.randint(2, 6)
    n = 2 * pairs_count
    pot = [0] * n
    pot[0], pot[1] = -100, 100
    for v in range(2, n, 2):
        p = rng.choice([-3, -2, -1, 1, 2, 3]) * 10 + v
        pot[v], pot[v + 1] = p, -p
    pairs = []
    for _ in range(rng.randint(1, 10)):
        x, y = rng.randrange(n), rng.randrange(n)
        if pot[x] > pot[y]:
            x, y = y, x
        if pot[x] < pot[y]:
            pairs.append((x, y, rng.randint(1, 3)))
    return SkewSymmetricNetwork.from_pairs(n, pairs)


def test_totally_blocking_flow_leaves_no_regular_path():
    rng = random.Random(33)
    positive = 0
    for _ in range(300):
        net = _acyclic_network(rng)
        f = totally_blocking_isflow(net)
        assert verify_isflow(net, f) == []
        rest = net.with_caps([c - v for c, v in zip(net.cap, f.values)])
        assert not oracle_rpath(build_split_graph(rest).graph)
        positive += f.value > 0
    assert positive > 30


def test_reduction_rejects_cycles():
    net = SkewSymmetricNetwork.from_pairs(6, [(2, 4, 1), (4, 2, 1)])
    with pytest.raises(ValueError):
        to_mbp_instance(net)
