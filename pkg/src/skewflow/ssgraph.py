"""Core data model for skew-symmetric graphs and networks.

Nodes are integers ``0..node_count-1`` and mates are positional: node ``2k``
pairs with ``2k+1``, so the mate of ``v`` is ``v ^ 1``.  The source is node 0
and the sink (its mate) is node 1.  Arcs are stored as parallel tuples with an
explicit mate table, because parallel arcs and arcs ``v -> mate(v)`` make it
impossible to infer arc mates from endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

SOURCE = 0
SINK = 1


def mate_node(v: int) -> int:
    """Return the mate of node ``v``."""
    return v ^ 1


@dataclass(frozen=True)
class SkewSymmetricNetwork:
    """Directed graph with a node/arc involution and symmetric capacities.

    Instances are not validated on construction; call :func:`validate_network`
    or use :meth:`from_pairs`, which builds mates by construction.
    """

    node_count: int
    tail: tuple[int, ...]
    head: tuple[int, ...]
    cap: tuple[int, ...]
    mate: tuple[int, ...]

    source: int = field(default=SOURCE, init=False)
    sink: int = field(default=SINK, init=False)

    @property
    def arc_count(self) -> int:
        return len(self.tail)

    @cached_property
    def out_arcs(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, x in enumerate(self.tail):
            out[x].append(a)
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, y in enumerate(self.head):
            inc[y].append(a)
        return tuple(tuple(lst) for lst in inc)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(tail, head, cap, mate)`` as int64 arrays."""
        return tuple(np.fromiter(x, dtype=np.int64, count=len(x)) for x in (self.tail, self.head, self.cap, self.mate))

    @cached_property
    def finite_total(self) -> int:
        return sum(self.cap)

    @classmethod
    def from_pairs(
        cls, node_count: int, pairs: Iterable[tuple[int, int, int]]
    ) -> SkewSymmetricNetwork:
        """Build a network from one representative per mate pair.

        Each ``(x, y, c)`` yields arc ``2i = (x, y)`` and its mate
        ``2i+1 = (mate(y), mate(x))``, both with capacity ``c``.
        """
        tail: list[int] = []
        head: list[int] = []
        cap: list[int] = []
        mate: list[int] = []
        for x, y, c in pairs:
            a = len(tail)
            tail += [x, y ^ 1]
            head += [y, x ^ 1]
            cap += [c, c]
            mate += [a + 1, a]
        return cls(node_count, tuple(tail), tuple(head), tuple(cap), tuple(mate))

    def with_caps(self, cap: Sequence[int]) -> SkewSymmetricNetwork:
        """Same graph with a new capacity vector."""
        if len(cap) != self.arc_count:
            raise ValueError("capacity vector length does not match arc count")
        return SkewSymmetricNetwork(self.node_count, self.tail, self.head, tuple(cap), self.mate)

    def arc(self, a: int) -> tuple[int, int, int]:
        return self.tail[a], self.head[a], self.cap[a]


def validate_network(net: SkewSymmetricNetwork) -> list[str]:
    """List every violated network invariant; an empty list means valid.

    Parameters:
        net: The network to check.

    Returns:
        Human-readable violations naming the offending node or arc ids.
    """
    problems: list[str] = []
    n = net.node_count
    m = net.arc_count
    if n < 2 or n % 2:
        problems.append(f"node count {n} must be even and at least 2")
    if not (len(net.head) == len(net.cap) == len(net.mate) == m):
        problems.append("arc tables have different lengths")
        return problems
    for a in range(m):
        x, y, c, b = net.tail[a], net.head[a], net.cap[a], net.mate[a]
        if not (0 <= x < n and 0 <= y < n):
            problems.append(f"arc {a} has an endpoint outside 0..{n - 1}")
            continue
        if not isinstance(c, int) or c < 0:
            problems.append(f"arc {a} has invalid capacity {c!r}")
        if not 0 <= b < m:
            problems.append(f"arc {a} has mate {b} outside the arc range")
            continue
        if b == a:
            problems.append(f"involution has fixed point at arc {a}")
            continue
        if net.mate[b] != a:
            problems.append(f"arc mate map is not an involution at arc {a}")
            continue
        if net.tail[b] != y ^ 1 or net.head[b] != x ^ 1:
            problems.append(f"arc {a}=({x},{y}) and mate {b} break the swap-and-mate rule")
        if a < b and net.cap[b] != c:
            problems.append(f"asymmetric capacity on pair ({a},{b})")
    return problems


def require_valid(net: SkewSymmetricNetwork) -> None:
    problems = validate_network(net)
    if problems:
        raise ValueError("invalid network: " + "; ".join(problems[:5]))


@dataclass(frozen=True)
class ISFlow:
    """Integer symmetric flow: one value per arc plus the flow value."""

    values: tuple[int, ...]
    value: int

    @classmethod
    def zero(cls, net: SkewSymmetricNetwork) -> ISFlow:
        return cls((0,) * net.arc_count, 0)

    @classmethod
    def from_values(cls, net: SkewSymmetricNetwork, values: Sequence[int]) -> ISFlow:
        """Wrap raw arc values, computing the value as the divergence at the source."""
        if len(values) != net.arc_count:
            raise ValueError("flow vector length does not match arc count")
        div = 0
        for a, v in enumerate(values):
            if net.tail[a] == SOURCE:
                div += v
            if net.head[a] == SOURCE:
                div -= v
        return cls(tuple(values), div)

    def __getitem__(self, a: int) -> int:
        return self.values[a]


def flow_violations(net: SkewSymmetricNetwork, values: Sequence[int]) -> list[str]:
    """Bounds, symmetry and conservation violations of an arc-value vector."""
    if len(values) != net.arc_count:
        return ["flow vector length does not match arc count"]
    vals = np.fromiter(values, dtype=np.int64, count=len(values))
    tail, head, cap, mate = net.arrays
    problems: list[str] = []
    bad_bounds = (vals < 0) | (vals > cap)
    bad_mate = vals[mate] != vals
    for a in np.flatnonzero(bad_bounds | bad_mate).tolist():
        if bad_bounds[a]:
            problems.append(f"arc {a} carries {values[a]} outside [0, {net.cap[a]}]")
        if bad_mate[a]:
            problems.append(f"asymmetric flow on arc {a}")
    div = np.zeros(net.node_count, dtype=np.int64)
    np.add.at(div, tail, vals)
    np.subtract.at(div, head, vals)
    for x in np.flatnonzero(div[2:]).tolist():
        problems.append(f"conservation fails at node {x + 2} (divergence {int(div[x + 2])})")
    return problems


def _require_flow(net: SkewSymmetricNetwork, values: Sequence[int], what: str) -> None:
    problems = flow_violations(net, values)
    if problems:
        raise ValueError(f"{what} is not a feasible IS-flow: " + "; ".join(problems[:5]))


@dataclass(frozen=True)
class ResidualNetwork:
    """Residual graph ``G+`` of a flow: arc ``a`` keeps its id, its reverse is ``a + m``."""

    base: SkewSymmetricNetwork
    flow: ISFlow
    graph: SkewSymmetricNetwork

    def original_arc(self, a: int) -> tuple[int, bool]:
        """Map a residual arc to ``(original arc, is_reverse)``."""
        m = self.base.arc_count
        return (a - m, True) if a >= m else (a, False)


def residual(net: SkewSymmetricNetwork, f: ISFlow) -> ResidualNetwork:
    """Build the residual network of a feasible IS-flow.

    Raises:
        ValueError: If ``f`` is not a feasible IS-flow of ``net``.
    """
    _require_flow(net, f.values, "flow")
    m = net.arc_count
    tail = net.tail + net.head
    head = net.head + net.tail
    cap = tuple(u - v for u, v in zip(net.cap, f.values)) + f.values
    mate = net.mate + tuple(b + m for b in net.mate)
    return ResidualNetwork(net, f, SkewSymmetricNetwork(net.node_count, tail, head, cap, mate))


def superpose(net: SkewSymmetricNetwork, f: ISFlow, g: Sequence[int]) -> ISFlow:
    """Apply a residual IS-flow ``g`` (indexed over ``G+``) to ``f``.

    Raises:
        ValueError: If ``g`` is not feasible in the residual network of ``f``.
    """
    res = residual(net, f)
    _require_flow(res.graph, g, "residual flow")
    m = net.arc_count
    values = [f.values[a] + g[a] - g[a + m] for a in range(m)]
    out = ISFlow.from_values(net, values)
    gval = ISFlow.from_values(res.graph, g).value
    assert out.value == f.value + gval
    return out


@dataclass(frozen=True)
class SplitGraph:
    """Split graph of a capacitated skew-symmetric graph.

    Arc ``a`` with capacity ``h`` becomes ``first[a]`` (capacity ``ceil(h/2)``)
    and, when ``h >= 2``, ``second[a]`` (capacity ``floor(h/2)``).  Missing split
    arcs are recorded as ``-1``.
    """

    original: SkewSymmetricNetwork
    graph: SkewSymmetricNetwork
    omega: tuple[int, ...]
    first: tuple[int, ...]
    second: tuple[int, ...]


def build_split_graph(graph: SkewSymmetricNetwork, h: Sequence[int] | None = None) -> SplitGraph:
    """Split every arc into halves so that regular paths model ``h``-regular ones.

    Parameters:
        graph: Skew-symmetric graph; its capacities are used when ``h`` is omitted.
        h: Symmetric nonnegative integer capacities.

    Returns:
        The split graph with the split-arc to original-arc map.

    Raises:
        ValueError: If ``h`` is negative or asymmetric.
    """
    if h is None:
        h = graph.cap
    m = graph.arc_count
    if len(h) != m:
        raise ValueError("capacity vector length does not match arc count")
    hs = np.fromiter(h, dtype=np.int64, count=m)
    gt, gh, _, gm = graph.arrays
    if m and (hs < 0).any():
        a = int(np.argmax(hs < 0))
        raise ValueError(f"negative capacity on arc {a}")
    if m and (hs[gm] != hs).any():
        a = int(np.argmax(hs[gm] != hs))
        raise ValueError(f"asymmetric capacity on pair ({a},{graph.mate[a]})")
    has1, has2 = hs >= 1, hs >= 2
    count = has1.astype(np.int64) + has2
    offset = np.cumsum(count) - count
    first_arr = np.where(has1, offset, -1)
    second_arr = np.where(has2, offset + 1, -1)
    size = int(count.sum())
    tail_arr = np.empty(size, dtype=np.int64)
    head_arr = np.empty(size, dtype=np.int64)
    cap_arr = np.empty(size, dtype=np.int64)
    omega_arr = np.empty(size, dtype=np.int64)
    mate_arr = np.empty(size, dtype=np.int64)
    arcs = np.arange(m, dtype=np.int64)
    for pos, keep, amount in ((first_arr, has1, (hs + 1) // 2), (second_arr, has2, hs // 2)):
        idx = pos[keep]
        tail_arr[idx] = gt[keep]
        head_arr[idx] = gh[keep]
        cap_arr[idx] = amount[keep]
        omega_arr[idx] = arcs[keep]
        mate_arr[idx] = pos[gm[keep]]
    tail, head, cap, mate = (x.tolist() for x in (tail_arr, head_arr, cap_arr, mate_arr))
    omega, first, second = omega_arr.tolist(), first_arr.tolist(), second_arr.tolist()
    split = SkewSymmetricNetwork(graph.node_count, tuple(tail), tuple(head), tuple(cap), tuple(mate))
    return SplitGraph(graph, split, tuple(omega), tuple(first), tuple(second))


def path_nodes(graph: SkewSymmetricNetwork, arcs: Sequence[int], start: int | None = None) -> list[int]:
    """Node sequence of an arc sequence, checking consecutive connectivity."""
    if not arcs:
        return [] if start is None else [start]
    nodes = [graph.tail[arcs[0]]]
    if start is not None and nodes[0] != start:
        raise ValueError(f"path starts at {nodes[0]}, expected {start}")
    for a in arcs:
        if graph.tail[a] != nodes[-1]:
            raise ValueError(f"arc {a} does not continue the path at node {nodes[-1]}")
        nodes.append(graph.head[a])
    return nodes


def is_regular(graph: SkewSymmetricNetwork, arcs: Sequence[int]) -> bool:
    """True if no arc appears together with its mate (or twice)."""
    seen = set(arcs)
    if len(seen) != len(arcs):
        return False
    return all(graph.mate[a] not in seen for a in arcs)


def is_simple_path(graph: SkewSymmetricNetwork, arcs: Sequence[int]) -> bool:
    nodes = path_nodes(graph, arcs)
    return len(set(nodes)) == len(nodes)


def h_capacity(graph: SkewSymmetricNetwork, h: Sequence[int], arcs: Sequence[int]) -> int:
    """Largest ``delta`` such that ``delta`` units fit on a path and on its mate.

    Ordinary arcs (mate not on the path) contribute ``h(a)``; arcs whose mate
    is also on the path contribute ``h(a) // 2``.
    """
    on = set(arcs)
    best: int | None = None
    for a in arcs:
        c = h[a] // 2 if graph.mate[a] in on else h[a]
        best = c if best is None else min(best, c)
    if best is None:
        raise ValueError("empty path has no capacity")
    return best


def lift_regular_path(split: SplitGraph, path: Sequence[int]) -> list[int]:
    """Lift an ``h``-regular path of the original graph to a regular split path.

    Raises:
        ValueError: If the path is not ``h``-regular.
    """
    g = split.original
    position = {a: i for i, a in enumerate(path)}
    if len(position) != len(path):
        raise ValueError("path repeats an arc")
    lifted: list[int] = []
    for i, a in enumerate(path):
        if split.first[a] < 0:
            raise ValueError(f"not h-regular at arc {a}")
        j = position.get(g.mate[a])
        if j is None:
            lifted.append(split.first[a])
        elif split.second[a] < 0:
            raise ValueError(f"not h-regular at arc {a}")
        else:
            lifted.append(split.first[a] if i < j else split.second[a])
    return lifted


@dataclass(frozen=True)
class Verdict:
    """Outcome of a certificate check; falsy when a condition fails."""

    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SBarrier:
    """Barrier ``(A; X_1..X_k)`` proving that no regular source-sink path exists."""

    A: frozenset[int]
    X: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class OddBarrier:
    """Odd barrier certificate; its capacity bounds every IS-flow value."""

    A: frozenset[int]
    X: tuple[frozenset[int], ...]
    capacity: int


def odd_barrier_capacity(net: SkewSymmetricNetwork, A: Iterable[int], k: int) -> int:
    inside = set(A)
    total = sum(net.cap[a] for a in range(net.arc_count) if net.tail[a] in inside and net.head[a] not in inside)
    return total - k


def infinity_sentinel(caps: Iterable[int]) -> int:
    """Capacity standing in for infinity: the sum of finite capacities plus one."""
    return sum(caps) + 1
