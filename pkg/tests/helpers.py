"""Random instance builders shared by the tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from skewflow.blockphase import MBPInstance
from skewflow.reductions import MatchingInstance
from skewflow.ssgraph import SkewSymmetricNetwork

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def small_network(rng: random.Random, max_pairs: int = 7, max_arc_pairs: int = 11, max_cap: int = 3) -> SkewSymmetricNetwork:
    n = 2 * rng.randint(1, max_pairs)
    k = rng.randint(0, max_arc_pairs)
    pairs = [(rng.randrange(n), rng.randrange(n), rng.randint(1, max_cap)) for _ in range(k)]
    return SkewSymmetricNetwork.from_pairs(n, pairs)


def small_graph(rng: random.Random, max_nodes: int = 12, max_edges: int = 18) -> MatchingInstance:
    n = rng.randint(1, max_nodes)
    possible = [(v, w) for v in range(n) for w in range(v + 1, n)]
    edges = rng.sample(possible, min(len(possible), rng.randint(0, max_edges)))
    return MatchingInstance.simple(n, edges)


def small_mbp(rng: random.Random, capmax: int = 1, max_nodes: int = 12, max_arcs: int = 22) -> MBPInstance:
    n = rng.randint(3, max_nodes)
    k = rng.randint(1, min(3, (n - 1) // 2))
    sources = list(range(1, 1 + 2 * k))
    pairs = tuple((sources[2 * i], sources[2 * i + 1]) for i in range(k))
    order = sources + list(range(1 + 2 * k, n)) + [0]
    tail, head = [], []
    for _ in range(rng.randint(1, max_arcs)):
        i = rng.randrange(len(order) - 1)
        j = rng.randrange(max(i + 1, 2 * k), len(order))
        tail.append(order[i])
        head.append(order[j])
    cap = tuple(rng.randint(1, capmax) for _ in tail)
    return MBPInstance(n, tuple(tail), tuple(head), 0, pairs, cap)


@st.composite
def networks(draw, max_pairs: int = 6, max_arc_pairs: int = 10, max_cap: int = 3) -> SkewSymmetricNetwork:
    n = 2 * draw(st.integers(1, max_pairs))
    node = st.integers(0, n - 1)
    pairs = draw(st.lists(st.tuples(node, node, st.integers(1, max_cap)), max_size=max_arc_pairs))
    return SkewSymmetricNetwork.from_pairs(n, pairs)


@st.composite
def graphs(draw, max_nodes: int = 10, max_edges: int = 16) -> MatchingInstance:
    n = draw(st.integers(1, max_nodes))
    if n < 2:
        return MatchingInstance.simple(n, [])
    edge = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    edges = draw(st.lists(edge, max_size=max_edges, unique_by=lambda e: (min(e), max(e))))
    return MatchingInstance.simple(n, edges)
