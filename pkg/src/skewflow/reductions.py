"""Matching-type problems as skew-symmetric flows, and lower-bound removal.

Node ``v`` of a matching instance becomes the mate pair ``2+2v`` / ``3+2v``.
Edge ``{v, w}`` becomes the arc pair ``(2+2v, 3+2w)`` and ``(2+2w, 3+2v)``;
node ``v`` becomes ``(s, 2+2v)`` and ``(3+2v, s')``.  A flow of value ``2k``
corresponds to a matching of value ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .ssgraph import (
    SINK,
    SOURCE,
    ISFlow,
    SkewSymmetricNetwork,
    flow_violations,
    infinity_sentinel,
    require_valid,
)

__all__ = [
    "BackMap",
    "BoundedNetwork",
    "LowerBoundReduction",
    "MatchingInstance",
    "MatchingResult",
    "UnitSplit",
    "eliminate_lower_bounds",
    "flow_to_matching",
    "matching_to_network",
    "node_pair",
    "saturating_flow",
    "solve_bounded",
    "solve_matching",
    "unit_split",
]


def node_pair(v: int) -> tuple[int, int]:
    """Network nodes standing for matching node ``v``."""
    return 2 + 2 * v, 3 + 2 * v


@dataclass(frozen=True)
class MatchingInstance:
    """Undirected multigraph with edge bounds ``(lo, hi)`` and node bounds ``(lo, hi)``.

    An edge upper bound of ``None`` means unbounded.  Omitted bounds default
    to ``(0, 1)``, i.e. ordinary matchings.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    edge_bounds: tuple[tuple[int, int | None], ...] = ()
    node_bounds: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.node_count < 0:
            raise ValueError("negative node count")
        if not self.edge_bounds:
            object.__setattr__(self, "edge_bounds", ((0, 1),) * len(self.edges))
        if not self.node_bounds:
            object.__setattr__(self, "node_bounds", ((0, 1),) * self.node_count)
        if len(self.edge_bounds) != len(self.edges) or len(self.node_bounds) != self.node_count:
            raise ValueError("bound arrays do not match the graph size")
        for v, w in self.edges:
            if not (0 <= v < self.node_count and 0 <= w < self.node_count):
                raise ValueError(f"edge ({v}, {w}) has an endpoint out of range")
        for i, (lo, hi) in enumerate(self.edge_bounds):
            if lo < 0 or (hi is not None and hi < lo):
                raise ValueError(f"edge {i} has bounds ({lo}, {hi}) with lower > upper or negative")
        for v, (lo, hi) in enumerate(self.node_bounds):
            if hi is None:
                raise ValueError(f"node {v} needs a finite upper bound")
            if lo < 0 or hi < lo:
                raise ValueError(f"node {v} has bounds ({lo}, {hi}) with lower > upper or negative")

    @classmethod
    def simple(cls, node_count: int, edges: Sequence[tuple[int, int]]) -> MatchingInstance:
        """Plain maximum-cardinality matching instance."""
        return cls(node_count, tuple((int(v), int(w)) for v, w in edges))

    def degrees(self, values: Sequence[int]) -> list[int]:
        deg = [0] * self.node_count
        for (v, w), h in zip(self.edges, values):
            deg[v] += h
            deg[w] += h
        return deg


@dataclass(frozen=True)
class BoundedNetwork:
    """Skew-symmetric network with symmetric lower bounds."""

    net: SkewSymmetricNetwork
    lower: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != self.net.arc_count:
            raise ValueError("lower-bound vector length does not match arc count")
        for a, lo in enumerate(self.lower):
            if lo < 0 or lo > self.net.cap[a]:
                raise ValueError(f"arc {a}: lower bound {lo} outside [0, {self.net.cap[a]}]")
            if lo != self.lower[self.net.mate[a]]:
                raise ValueError(f"arc {a}: lower bound differs from its mate")

    @property
    def has_lower(self) -> bool:
        return any(self.lower)


@dataclass(frozen=True)
class BackMap:
    """Which network arcs stand for which edges and nodes.

    ``owner[a]`` is ``("edge", i)`` or ``("node", v)``; ``edge_arc[i]`` and
    ``node_arc[v]`` give the representative arc of each pair.
    """

    instance: MatchingInstance
    network: BoundedNetwork
    owner: tuple[tuple[str, int], ...]
    edge_arc: tuple[int, ...]
    node_arc: tuple[int, ...]


def _clamped_node_bounds(inst: MatchingInstance) -> list[tuple[int, int]]:
    room = [0] * inst.node_count
    unbounded = [False] * inst.node_count
    for (v, w), (_, hi) in zip(inst.edges, inst.edge_bounds):
        for x in (v, w):
            if hi is None:
                unbounded[x] = True
            else:
                room[x] += hi
    out = []
    for v, (lo, hi) in enumerate(inst.node_bounds):
        if not unbounded[v]:
            hi = max(lo, min(hi, room[v]))
        out.append((lo, hi))
    return out


def matching_to_network(inst: MatchingInstance) -> tuple[BoundedNetwork, BackMap]:
    """Skew-symmetric network whose IS-flows are the instance's matchings.

    Node upper bounds above the total incident edge capacity are lowered to
    it; unbounded edges get a capacity no feasible matching can reach.

    Returns:
        The bounded network and the arc ownership map.
    """
    node_bounds = _clamped_node_bounds(inst)
    big = infinity_sentinel(hi for _, hi in node_bounds)
    pairs: list[tuple[int, int, int]] = []
    lower: list[int] = []
    owner: list[tuple[str, int]] = []
    for i, ((v, w), (lo, hi)) in enumerate(zip(inst.edges, inst.edge_bounds)):
        pairs.append((node_pair(v)[0], node_pair(w)[1], big if hi is None else hi))
        lower += [lo, lo]
        owner += [("edge", i), ("edge", i)]
    for v, (lo, hi) in enumerate(node_bounds):
        pairs.append((SOURCE, node_pair(v)[0], hi))
        lower += [lo, lo]
        owner += [("node", v), ("node", v)]
    net = SkewSymmetricNetwork.from_pairs(2 * inst.node_count + 2, pairs)
    bounded = BoundedNetwork(net, tuple(lower))
    m_edges = len(inst.edges)
    bm = BackMap(
        inst,
        bounded,
        tuple(owner),
        tuple(2 * i for i in range(m_edges)),
        tuple(2 * (m_edges + v) for v in range(inst.node_count)),
    )
    return bounded, bm


def flow_to_matching(f: ISFlow, bm: BackMap) -> list[int]:
    """Edge values of the matching that corresponds to ``f``.

    Raises:
        ValueError: If ``f`` is not feasible for the reduced network, bounds
            included.
    """
    net = bm.network.net
    problems = flow_violations(net, f.values)
    if problems:
        raise ValueError("flow is infeasible: " + "; ".join(problems[:3]))
    low = [a for a in range(net.arc_count) if f.values[a] < bm.network.lower[a]]
    if low:
        raise ValueError(f"flow is below the lower bound on arc {low[0]}")
    h = [f.values[a] for a in bm.edge_arc]
    assert 2 * sum(h) == f.value
    return h


# -- lower bounds --------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundReduction:
    """Network without lower bounds plus the recipe to read results back.

    ``carrier[a]`` is the new arc whose flow equals the flow on original arc
    ``a``; ``extra`` lists the arcs that must be saturated.
    """

    net: SkewSymmetricNetwork
    original: BoundedNetwork
    carrier: tuple[int, ...]
    extra: tuple[int, ...]

    def saturated(self, f: ISFlow) -> bool:
        return all(f.values[a] == self.net.cap[a] for a in self.extra)

    def induced(self, f: ISFlow) -> ISFlow:
        """Restrict a flow of the new network to the original arcs.

        Raises:
            ValueError: If some extra arc is not saturated.
        """
        if not self.saturated(f):
            raise ValueError("extra arcs are not saturated; the bounded problem has no solution here")
        return ISFlow.from_values(self.original.net, [f.values[c] for c in self.carrier])


def eliminate_lower_bounds(bounded: BoundedNetwork) -> LowerBoundReduction:
    """Replace lower bounds by subdivision and saturating source/sink arcs.

    An arc ``(x, y)`` with lower bound ``l > 0`` becomes ``(x, p)``,
    ``(p, q)``, ``(q, y)`` with capacities ``u``, ``u - l``, ``u`` plus
    ``(s, q)`` and ``(p, s')`` of capacity ``l``.  Arcs without a lower bound
    are copied unchanged.
    """
    net = bounded.net
    require_valid(net)
    pairs: list[tuple[int, int, int]] = []
    carrier = [0] * net.arc_count
    extra: list[int] = []
    n = net.node_count
    for a in range(net.arc_count):
        b = net.mate[a]
        if b < a:
            continue
        x, y, u = net.tail[a], net.head[a], net.cap[a]
        lo = bounded.lower[a]
        if lo == 0:
            carrier[a], carrier[b] = 2 * len(pairs), 2 * len(pairs) + 1
            pairs.append((x, y, u))
            continue
        p, q = n, n + 2
        n += 4
        carrier[a], carrier[b] = 2 * len(pairs), 2 * len(pairs) + 1
        pairs.append((x, p, u))
        pairs.append((p, q, u - lo))
        pairs.append((q, y, u))
        extra += [2 * len(pairs), 2 * len(pairs) + 1]
        pairs.append((SOURCE, q, lo))
        extra += [2 * len(pairs), 2 * len(pairs) + 1]
        pairs.append((p, SINK, lo))
    new = SkewSymmetricNetwork.from_pairs(n, pairs)
    return LowerBoundReduction(new, bounded, tuple(carrier), tuple(extra))


Solver = Callable[[SkewSymmetricNetwork], "object"]


def solve_bounded(bounded: BoundedNetwork, solver: Solver) -> ISFlow | None:
    """Maximum IS-flow respecting lower bounds, or ``None`` if none exists.

    ``solver`` is any function returning an object with a ``flow`` attribute,
    such as the solvers in :mod:`skewflow.solvers`.  If its maximum flow of
    the reduced network leaves an extra arc unsaturated, feasibility is
    settled by :func:`saturating_flow` instead, because some maximum flows
    miss the extra arcs even when the bounded problem is feasible.
    """
    if not bounded.has_lower:
        return solver(bounded.net).flow
    red = eliminate_lower_bounds(bounded)
    f = solver(red.net).flow
    if not red.saturated(f):
        from .solvers import max_isflow_augmenting

        start = saturating_flow(red)
        if start is None:
            return None
        # regular augmenting paths never re-enter the source or leave the
        # sink, so the extra arcs stay saturated
        f = max_isflow_augmenting(red.net, start).flow
    return red.induced(f)


def saturating_flow(red: LowerBoundReduction) -> ISFlow | None:
    """Some IS-flow of the reduced network that saturates every extra arc.

    The old terminals become inner nodes joined by a sink-to-source arc pair
    of unbounded capacity, and the extra arcs are attached to fresh
    terminals.  The extra arcs are the only arcs at the fresh terminals, so a
    maximum flow there fills them all exactly when the bounded problem is
    feasible.
    """
    from .solvers import max_isflow_augmenting

    net = red.net
    m = net.arc_count
    n = net.node_count + 2
    moved = {SOURCE: n - 2, SINK: n - 1}
    tail = [moved.get(t, t) for t in net.tail]
    head = [moved.get(h, h) for h in net.head]
    for a in red.extra:
        if net.tail[a] == SOURCE:
            tail[a] = SOURCE
        if net.head[a] == SINK:
            head[a] = SINK
    big = infinity_sentinel(net.cap)
    circ = SkewSymmetricNetwork(
        n,
        tuple(tail) + (n - 1, n - 1),
        tuple(head) + (n - 2, n - 2),
        net.cap + (big, big),
        net.mate + (m + 1, m),
    )
    g = max_isflow_augmenting(circ).flow
    if any(g.values[a] != net.cap[a] for a in red.extra):
        return None
    f = ISFlow.from_values(net, g.values[:m])
    assert not flow_violations(net, f.values)
    return f


# -- unit capacities -----------------------------------------------------------


@dataclass(frozen=True)
class UnitSplit:
    """Unit-capacity network and, per new arc, the original arc it copies."""

    net: SkewSymmetricNetwork
    origin: tuple[int, ...]

    def fold(self, f: ISFlow, original: SkewSymmetricNetwork) -> ISFlow:
        values = [0] * original.arc_count
        for a, v in enumerate(f.values):
            values[self.origin[a]] += v
        return ISFlow.from_values(original, values)


def unit_split(net: SkewSymmetricNetwork, limit: int = 10**6) -> UnitSplit:
    """Replace each arc pair of capacity ``c`` by ``c`` parallel unit pairs.

    Raises:
        ValueError: If a capacity exceeds ``limit`` (treated as infinite).
    """
    pairs: list[tuple[int, int, int]] = []
    origin: list[int] = []
    for a in range(net.arc_count):
        b = net.mate[a]
        if b < a:
            continue
        c = net.cap[a]
        if c > limit:
            raise ValueError(f"arc {a} has capacity {c}; unbounded arcs cannot be split")
        for _ in range(c):
            pairs.append((net.tail[a], net.head[a], 1))
            origin += [a, b]
    return UnitSplit(SkewSymmetricNetwork.from_pairs(net.node_count, pairs), tuple(origin))


# -- end to end ----------------------------------------------------------------


@dataclass(frozen=True)
class MatchingResult:
    values: tuple[int, ...] | None
    flow: ISFlow | None

    @property
    def feasible(self) -> bool:
        return self.values is not None

    @property
    def size(self) -> int:
        return sum(self.values) if self.values is not None else 0


def solve_matching(inst: MatchingInstance, solver: Solver) -> MatchingResult:
    """Maximum bounded matching through the flow reduction."""
    bounded, bm = matching_to_network(inst)
    f = solve_bounded(bounded, solver)
    if f is None:
        return MatchingResult(None, None)
    return MatchingResult(tuple(flow_to_matching(f, bm)), f)
