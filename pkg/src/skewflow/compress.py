"""Symmetric clique compression for dense matching networks.

The edge layer of a matching network is a bipartite digraph from the
``v1`` nodes to the ``v2`` nodes whose arc set is closed under the mate map.
Its arcs are covered by complete bipartite cliques ``A x B`` taken in mate
pairs; every clique becomes a star through a new node, so ``|A| * |B|``
arcs become ``|A| + |B|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .reductions import MatchingInstance, matching_to_network, node_pair
from .ssgraph import ISFlow, SkewSymmetricNetwork, flow_violations

__all__ = [
    "Clique",
    "CliquePartition",
    "StarTransform",
    "compress_matching",
    "compress_to_stars",
    "decompress_flow",
    "delta_clique_sizes",
    "layer_arcs",
    "measured_ratio",
    "symmetric_clique_partition",
]


@dataclass(frozen=True)
class Clique:
    """Arcs ``(a, b)`` for all ``a`` in ``left`` and ``b`` in ``right``."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.left) + len(self.right)

    @property
    def arc_count(self) -> int:
        return len(self.left) * len(self.right)

    def mirror(self) -> Clique:
        return Clique(self.right, self.left)

    def arcs(self) -> Iterable[tuple[int, int]]:
        return ((a, b) for a in self.left for b in self.right)


@dataclass(frozen=True)
class CliquePartition:
    """Cliques covering a symmetric arc set; entries ``2i`` and ``2i+1`` are mates."""

    node_count: int
    cliques: tuple[Clique, ...]

    @property
    def size(self) -> int:
        return sum(c.size for c in self.cliques)

    def check(self, arcs: Iterable[tuple[int, int]]) -> None:
        """Confirm the cliques partition ``arcs`` and come in mate pairs.

        Raises:
            ValueError: If an arc is missing, covered twice or unknown, or a
                clique's partner is not its mirror image.
        """
        wanted = set(arcs)
        seen: set[tuple[int, int]] = set()
        if len(self.cliques) % 2:
            raise ValueError("cliques must come in mate pairs")
        for i in range(0, len(self.cliques), 2):
            if self.cliques[i + 1] != self.cliques[i].mirror():
                raise ValueError(f"clique {i + 1} is not the mirror of clique {i}")
        for c in self.cliques:
            for arc in c.arcs():
                if arc in seen:
                    raise ValueError(f"arc {arc} is covered twice")
                if arc not in wanted:
                    raise ValueError(f"arc {arc} is not in the graph")
                seen.add(arc)
        if seen != wanted:
            raise ValueError(f"{len(wanted - seen)} arcs are not covered")


def delta_clique_sizes(n: int, m: int, delta: float) -> tuple[int, int]:
    """Target side sizes ``(|A|, |B|)`` of a clique for ``n`` nodes per side and ``m`` arcs.

    Raises:
        ValueError: If ``delta`` is not in (0, 1/2) or ``m`` is outside ``[1, n^2]``.
    """
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie strictly between 0 and 1/2")
    if n < 1 or not 1 <= m <= n * n:
        raise ValueError("arc count must lie in [1, n^2]")
    a = math.ceil(n ** (1 - delta) - 1e-9)
    b = math.floor(delta * math.log(n) / math.log(2 * n * n / m) + 1e-9)
    return a, b


def symmetric_clique_partition(node_count: int, arcs: Iterable[tuple[int, int]], delta: float = 0.25) -> CliquePartition:
    """Cover a mate-closed bipartite arc set by mate pairs of cliques.

    ``(a, b)`` means an arc from the left copy of ``a`` to the right copy of
    ``b``; its mate is ``(b, a)``.  While the graph has at least
    ``2 n^(2-delta)`` arcs, a clique is grown greedily: left nodes are taken
    in order of decreasing degree, up to the target left size, while the
    common neighbourhood keeps the target right size.  The prefix that saves
    the most arcs is kept, with its whole common neighbourhood as the right
    side.  Cliques that would not save arcs end the search.  Each
    accepted clique is removed together with its mirror; the remaining arcs
    become single-arc cliques.

    Raises:
        ValueError: On loops, parallel arcs or an arc set not closed under
            the mate map.
    """
    arc_list = list(arcs)
    arc_set = set(arc_list)
    if len(arc_set) != len(arc_list):
        raise ValueError("parallel arcs are not allowed")
    for a, b in arc_list:
        if a == b:
            raise ValueError("an arc between a node and its own mate is not allowed")
        if not (0 <= a < node_count and 0 <= b < node_count):
            raise ValueError("arc endpoint out of range")
        if (b, a) not in arc_set:
            raise ValueError(f"arc {(a, b)} has no mate")
    out: dict[int, set[int]] = {v: set() for v in range(node_count)}
    for a, b in arc_list:
        out[a].add(b)
    n = node_count
    m = len(arc_list)
    cliques: list[Clique] = []
    while m and m >= 2 * n ** (2 - delta):
        want_a, want_b = delta_clique_sizes(n, m, delta)
        if want_b < 1:
            break
        found = _grow_clique(out, want_a, want_b)
        if found is None:
            break
        left, right = found
        c = Clique(tuple(sorted(left)), tuple(sorted(right)))
        if c.arc_count < c.size or c.arc_count < 2:
            break
        for a, b in c.arcs():
            out[a].discard(b)
            out[b].discard(a)
        m -= 2 * c.arc_count
        cliques += [c, c.mirror()]
    for a in range(n):
        for b in sorted(out[a]):
            if a < b:
                single = Clique((a,), (b,))
                cliques += [single, single.mirror()]
    return CliquePartition(n, tuple(cliques))


def _grow_clique(out: dict[int, set[int]], want_a: int, want_b: int) -> tuple[list[int], set[int]] | None:
    """Greedy clique: the prefix of a degree-ordered left side that saves the most arcs."""
    order = sorted((v for v in out if len(out[v]) >= want_b), key=lambda v: (-len(out[v]), v))
    if not order:
        return None
    left = [order[0]]
    common = out[order[0]] - {order[0]}
    best: tuple[int, int, set[int]] = (len(common) - 1 - len(common), 1, common)
    for x in order[1:]:
        if len(left) == want_a:
            break
        # the mate of a clique must not overlap it
        narrowed = (common & out[x]) - {x}
        if len(narrowed) < want_b:
            continue
        left.append(x)
        common = narrowed
        k = len(left)
        saved = k * len(common) - k - len(common)
        if saved > best[0]:
            best = (saved, k, common)
    _, k, right = best
    if len(right) < want_b:
        return None
    return left[:k], right


# -- stars ---------------------------------------------------------------------


def layer_arcs(net: SkewSymmetricNetwork) -> dict[tuple[int, int], int]:
    """Edge-layer arcs of a matching network keyed by matching-node pair."""
    layer: dict[tuple[int, int], int] = {}
    for a in range(net.arc_count):
        x, y = net.tail[a], net.head[a]
        if x >= 2 and y >= 2 and x % 2 == 0 and y % 2 == 1:
            key = ((x - 2) // 2, (y - 3) // 2)
            if key in layer:
                raise ValueError(f"parallel layer arcs for pair {key}")
            layer[key] = a
    return layer


@dataclass(frozen=True)
class StarTransform:
    """Compressed network and what each of its arcs stands for.

    ``origin[a]`` is ``("arc", original_arc)`` for copied arcs, or
    ``("in", clique, node)`` / ``("out", clique, node)`` for star arcs.
    """

    original: SkewSymmetricNetwork
    net: SkewSymmetricNetwork
    partition: CliquePartition
    centers: tuple[int, ...]
    origin: tuple[tuple, ...]
    layer: dict[tuple[int, int], int]

    @property
    def saved_arcs(self) -> int:
        return self.original.arc_count - self.net.arc_count


def compress_to_stars(net: SkewSymmetricNetwork, partition: CliquePartition) -> StarTransform:
    """Replace each multi-arc clique of the edge layer by a star.

    Single-arc cliques are kept as the original arc.  Star arcs get
    capacity one, so the layer must have unit capacities and every left node
    may receive at most one unit.

    Raises:
        ValueError: If the partition does not cover the layer or the
            capacity conditions fail.
    """
    layer = layer_arcs(net)
    partition.check(layer)
    for a in layer.values():
        if net.cap[a] != 1:
            raise ValueError("star compression needs unit capacities on the edge layer")
    for v in range(partition.node_count):
        x = node_pair(v)[0]
        if sum(net.cap[a] for a in net.in_arcs[x]) > 1:
            raise ValueError(f"node {v} may receive more than one unit; stars would not be exact")
    covered = set(layer.values())
    pairs: list[tuple[int, int, int]] = []
    origin: list[tuple] = []
    for a in range(net.arc_count):
        b = net.mate[a]
        if a < b and a not in covered:
            pairs.append((net.tail[a], net.head[a], net.cap[a]))
            origin += [("arc", a), ("arc", b)]
    n = net.node_count
    centers: list[int] = []
    for i in range(0, len(partition.cliques), 2):
        c = partition.cliques[i]
        if c.arc_count == 1:
            a = layer[(c.left[0], c.right[0])]
            pairs.append((net.tail[a], net.head[a], 1))
            origin += [("arc", a), ("arc", net.mate[a])]
            centers.append(-1)
            continue
        z = n
        n += 2
        centers.append(z)
        for x in c.left:
            pairs.append((node_pair(x)[0], z, 1))
            origin += [("in", i, x), ("out", i + 1, x)]
        for y in c.right:
            pairs.append((z, node_pair(y)[1], 1))
            origin += [("out", i, y), ("in", i + 1, y)]
    compressed = SkewSymmetricNetwork.from_pairs(n, pairs)
    return StarTransform(net, compressed, partition, tuple(centers), tuple(origin), layer)


def decompress_flow(f: ISFlow, st: StarTransform) -> ISFlow:
    """Route star throughput back onto clique arcs.

    Units entering a star are paired with units leaving it in sorted order;
    the mirror star gets the mirrored pairing, so the result stays symmetric.

    Raises:
        ValueError: If ``f`` is infeasible on the compressed network.
    """
    problems = flow_violations(st.net, f.values)
    if problems:
        raise ValueError("compressed flow is infeasible: " + "; ".join(problems[:3]))
    values = [0] * st.original.arc_count
    ins: dict[int, list[int]] = {}
    outs: dict[int, list[int]] = {}
    for a, tag in enumerate(st.origin):
        v = f.values[a]
        if not v:
            continue
        if tag[0] == "arc":
            values[tag[1]] += v
        elif tag[1] % 2 == 0:
            (ins if tag[0] == "in" else outs).setdefault(tag[1], []).append(tag[2])
    for i in set(ins) | set(outs):
        left, right = sorted(ins.get(i, [])), sorted(outs.get(i, []))
        if len(left) != len(right):
            raise ValueError(f"star {i} does not conserve flow")
        for x, y in zip(left, right):
            values[st.layer[(x, y)]] += 1
            values[st.layer[(y, x)]] += 1
    out = ISFlow.from_values(st.original, values)
    assert out.value == f.value
    return out


def compress_matching(inst: MatchingInstance, delta: float = 0.25) -> StarTransform:
    """Star-compressed network of a plain matching instance.

    Loops and repeated edges are dropped first; neither can change the
    maximum matching size.

    Raises:
        ValueError: If the instance has non-default bounds.
    """
    if any(b != (0, 1) for b in inst.edge_bounds) or any(b != (0, 1) for b in inst.node_bounds):
        raise ValueError("compression supports plain matching instances only")
    edges = sorted({(min(v, w), max(v, w)) for v, w in inst.edges if v != w})
    simple = MatchingInstance.simple(inst.node_count, edges)
    bounded, _ = matching_to_network(simple)
    arcs = [(v, w) for v, w in edges] + [(w, v) for v, w in edges]
    part = symmetric_clique_partition(inst.node_count, arcs, delta)
    return compress_to_stars(bounded.net, part)


def measured_ratio(st: StarTransform) -> float:
    """Partition size divided by ``m * beta`` with ``beta = log(n^2/m) / log n``."""
    n = st.partition.node_count
    m = len(st.layer)
    if n < 2 or m == 0:
        return float("nan")
    beta = math.log(n * n / m) / math.log(n)
    return st.partition.size / (m * beta) if beta > 0 else float("inf")

