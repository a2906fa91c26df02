"""Totally blocking IS-flows in acyclic networks.

The problem is reduced to finding a maximal balanced path-set (MBP): in an
acyclic digraph with paired sources, a maximal set of arc-disjoint
source-to-sink paths that can be grouped into pairs starting at mate
sources.  The solver is a transit depth-first search that shrinks dead
regions into complex nodes; the capacitated version runs the same engine on
a split graph and weights each pair as heavily as possible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .ssgraph import SINK, SOURCE, ISFlow, SkewSymmetricNetwork

__all__ = [
    "BalancedPathSet",
    "GoodPair",
    "MBPInstance",
    "MBPReduction",
    "check_mbp_instance",
    "solve_bbf",
    "solve_mbp",
    "to_mbp_instance",
    "totally_blocking_isflow",
]


@dataclass(frozen=True)
class MBPInstance:
    """Acyclic digraph with a sink and a set of mate-paired sources.

    ``cap`` defaults to all ones.
    """

    node_count: int
    tail: tuple[int, ...]
    head: tuple[int, ...]
    sink: int
    pairs: tuple[tuple[int, int], ...]
    cap: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.cap:
            object.__setattr__(self, "cap", (1,) * len(self.tail))

    @property
    def arc_count(self) -> int:
        return len(self.tail)


@dataclass(frozen=True)
class GoodPair:
    """Paths from a source and from its mate, each carrying ``weight`` units."""

    first: tuple[int, ...]
    second: tuple[int, ...]
    weight: int = 1


@dataclass(frozen=True)
class BalancedPathSet:
    pairs: tuple[GoodPair, ...]

    def load(self, inst: MBPInstance) -> list[int]:
        """Total weight on each arc."""
        total = [0] * inst.arc_count
        for p in self.pairs:
            for e in p.first + p.second:
                total[e] += p.weight
        return total

    def __len__(self) -> int:
        return len(self.pairs)


def check_mbp_instance(inst: MBPInstance) -> None:
    """Reject malformed instances.

    Raises:
        ValueError: On cycles, bad pairing, sources with incoming arcs or
            non-positive capacities.
    """
    n = inst.node_count
    if len(inst.head) != len(inst.tail) or len(inst.cap) != len(inst.tail):
        raise ValueError("arc arrays differ in length")
    if not 0 <= inst.sink < n:
        raise ValueError("sink out of range")
    for x, y in zip(inst.tail, inst.head):
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError("arc endpoint out of range")
    if any(c <= 0 for c in inst.cap):
        raise ValueError("arc capacities must be positive; delete zero-capacity arcs first")
    seen: set[int] = set()
    for z, zm in inst.pairs:
        if z == zm or z in seen or zm in seen:
            raise ValueError(f"source pair ({z}, {zm}) is not a proper pairing")
        seen.update((z, zm))
    if inst.sink in seen:
        raise ValueError("the sink cannot be a source")
    if any(y in seen for y in inst.head):
        raise ValueError("sources must have zero indegree")
    if not _acyclic(n, inst.tail, inst.head):
        raise ValueError("MBP instance must be acyclic")


def _acyclic(n: int, tail: Sequence[int], head: Sequence[int]) -> bool:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for x, y in zip(tail, head):
        indeg[y] += 1
        out[x].append(y)
    q = deque(v for v in range(n) if indeg[v] == 0)
    done = 0
    while q:
        x = q.popleft()
        done += 1
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                q.append(y)
    return done == n


@dataclass
class _Record:
    root_item: int
    root_node: int
    arcs: list[int]
    inner: dict[int, list[int]] | None = None


class _Engine:
    """Transit DFS with complex-node shrinking on a working digraph.

    ``on_pair`` receives a good pair as two lists of working arcs from the
    initial graph and returns the arcs to delete.
    """

    def __init__(self, n: int, tail: Sequence[int], head: Sequence[int], present: Sequence[bool],
                 sink: int, pairs: Sequence[tuple[int, int]],
                 on_pair: Callable[[list[int], list[int]], list[int]]) -> None:
        self.n = n
        self.tail = tail
        self.head = head
        self.sink = sink
        self.on_pair = on_pair
        m = len(tail)
        self.alive = list(present)
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.inl: list[list[int]] = [[] for _ in range(n)]
        self.indeg = [0] * n
        self.outdeg = [0] * n
        for e in range(m):
            if self.alive[e]:
                self.out[tail[e]].append(e)
                self.inl[head[e]].append(e)
                self.outdeg[tail[e]] += 1
                self.indeg[head[e]] += 1
        self.uf = list(range(n))
        self.node_alive = [True] * n
        self.mate: dict[int, int] = {}
        self.is_source = [False] * n
        for z, zm in pairs:
            self.mate[z], self.mate[zm] = zm, z
            self.is_source[z] = self.is_source[zm] = True
        self.item_parent: dict[int, int] = {}
        self.cur_item = list(range(n))
        self.records: list[_Record] = []
        self.live_complex: set[int] = set()
        self.rp: list[int] = []  # pre-path, sink side first
        self.on_path = [False] * m
        self.pin: dict[int, int] = {}
        self.shrinks = 0
        self.breakthroughs = 0

    def find(self, x: int) -> int:
        uf = self.uf
        r = x
        while uf[r] != r:
            r = uf[r]
        while uf[x] != r:
            uf[x], x = r, uf[x]
        return r

    # -- deletion and cleaning ---------------------------------------------------

    def _drop_arc(self, e: int, queue: list[int]) -> None:
        if not self.alive[e]:
            return
        self.alive[e] = False
        x, y = self.find(self.tail[e]), self.find(self.head[e])
        self.outdeg[x] -= 1
        self.indeg[y] -= 1
        queue.append(x)
        queue.append(y)

    def _clean(self, queue: list[int]) -> None:
        doomed: set[int] = set()
        while queue:
            x = queue.pop()
            if not self.node_alive[x] or x == self.sink:
                continue
            dead = x in doomed or self.outdeg[x] == 0 or (self.indeg[x] == 0 and not self.is_source[x])
            if not dead:
                continue
            self.node_alive[x] = False
            self.live_complex.discard(x)
            if self.is_source[x]:
                self.is_source[x] = False
                zm = self.mate[x]
                if self.is_source[zm]:
                    doomed.add(zm)
                    queue.append(zm)
            for e in self.out[x]:
                self._drop_arc(e, queue)
            for e in self.inl[x]:
                self._drop_arc(e, queue)

    def _truncate(self) -> None:
        """Keep the longest alive part of the pre-path at the sink end."""
        rp = self.rp
        keep = 0
        while keep < len(rp) and self.alive[rp[keep]]:
            keep += 1
        for e in rp[keep:]:
            self.on_path[e] = False
            key = self.find(self.head[e])
            if self.pin.get(key) == e:
                del self.pin[key]
        del rp[keep:]

    def _clear_path(self) -> None:
        for e in self.rp:
            self.on_path[e] = False
        self.rp.clear()
        self.pin.clear()

    # -- main loop ---------------------------------------------------------------

    def run(self) -> None:
        self._clean(list(range(self.n)))
        while self.indeg[self.sink] > 0:
            z = self._extend()
            found = self._tdfs(z, self.mate[z])
            if found is not None:
                self._breakthrough(z, found)
            else:
                self._shrink(z)

    def _in_arc(self, x: int) -> int:
        lst = self.inl[x]
        while lst:
            e = lst[-1]
            if self.alive[e]:
                return e
            lst.pop()
        raise AssertionError("cleaning left a node without incoming arcs")

    def _extend(self) -> int:
        rp = self.rp
        x = self.find(self.tail[rp[-1]]) if rp else self.sink
        while not self.is_source[x]:
            e = self._in_arc(x)
            rp.append(e)
            self.on_path[e] = True
            self.pin[x] = e
            x = self.find(self.tail[e])
        return x

    def _tdfs(self, z: int, zm: int) -> list[tuple[int, bool]] | None:
        find, alive, on_path = self.find, self.alive, self.on_path
        ptr: dict[int, int] = {}
        pin_used: set[int] = set()
        visited = {zm}
        self.visited = visited
        stack: list[tuple[int, bool, int]] = []
        x = zm
        while True:
            if x == self.sink:
                return [(e, fwd) for e, fwd, _ in stack]
            lst = self.out[x]
            i = ptr.get(x, 0)
            nxt = -1
            while i < len(lst):
                e = lst[i]
                if not alive[e]:
                    lst[i] = lst[-1]
                    lst.pop()
                    continue
                i += 1
                if not on_path[e]:
                    nxt = e
                    break
            ptr[x] = i
            if nxt >= 0:
                stack.append((nxt, True, x))
                x = find(self.head[nxt])
                visited.add(x)
                continue
            e = self.pin.get(x, -1)
            if e >= 0 and x not in pin_used:
                pin_used.add(x)
                stack.append((e, False, x))
                x = find(self.tail[e])
                visited.add(x)
                continue
            if not stack:
                return None
            _, _, x = stack.pop()

    def _breakthrough(self, z: int, active: list[tuple[int, bool]]) -> None:
        self.breakthroughs += 1
        back = {e for e, fwd in active if not fwd}
        arcs = [e for e in self.rp if e not in back] + [e for e, fwd in active if fwd]
        by_tail: dict[int, list[int]] = {}
        for e in arcs:
            by_tail.setdefault(self.find(self.tail[e]), []).append(e)
        paths = []
        for start in (z, self.mate[z]):
            walk = []
            x = start
            while x != self.sink:
                e = by_tail[x].pop()
                walk.append(e)
                x = self.find(self.head[e])
            paths.append(walk)
        assert all(not v for v in by_tail.values()), "symmetric difference left a cycle"
        q = self._expand(z, paths[0])
        r = self._expand(self.mate[z], paths[1])
        queue: list[int] = []
        for e in self.on_pair(q, r):
            self._drop_arc(e, queue)
        self._clear_path()
        self._clean(queue)
        if self.live_complex:
            raise RuntimeError("a complex node survived a breakthrough")

    def _shrink(self, z: int) -> None:
        self.shrinks += 1
        find = self.find
        Y = self.visited
        zm = self.mate[z]
        if {y for y in Y if self.is_source[y]} != {z, zm}:
            raise RuntimeError("visited set meets other sources")
        leaving = []
        internal = []
        for y in Y:
            for e in self.out[y]:
                if self.alive[e]:
                    (internal if find(self.head[e]) in Y else leaving).append(e)
        if len(leaving) != 1 or not self.on_path[leaving[0]]:
            raise RuntimeError("visited set is not left by a unique pre-path arc")
        a = leaving[0]
        v = find(self.tail[a])
        new_indeg = sum(self.indeg[y] for y in Y) - len(internal)
        for e in internal:
            self.alive[e] = False
        item = self.n + len(self.records)
        self.records.append(_Record(self.cur_item[v], v, internal))
        for y in Y:
            self.item_parent[self.cur_item[y]] = item
            self.live_complex.discard(y)
            if y != v:
                self.uf[y] = v
                self.node_alive[y] = False
        self.cur_item[v] = item
        self.live_complex.add(v)
        lists = sorted((self.inl[y] for y in Y), key=len, reverse=True)
        merged = lists[0]
        for other in lists[1:]:
            merged.extend(other)
        self.inl[v] = merged
        self.indeg[v] = new_indeg
        self.outdeg[v] = 1
        self.is_source[z] = self.is_source[zm] = False
        self._truncate()
        self._clean([v])
        self._truncate()

    # -- path expansion ----------------------------------------------------------

    def _member(self, node: int, rec: int) -> int:
        item = node
        while self.item_parent[item] != rec:
            item = self.item_parent[item]
        return item

    def _inner_path(self, rec_item: int, start: int) -> list[int]:
        rec = self.records[rec_item - self.n]
        if rec.inner is None:
            adj: dict[int, list[int]] = {}
            for e in rec.arcs:
                adj.setdefault(self._member(self.tail[e], rec_item), []).append(e)
            rec.inner = adj
        prev: dict[int, int] = {start: -1}
        q = deque([start])
        while q:
            x = q.popleft()
            if x == rec.root_item:
                break
            for e in rec.inner.get(x, ()):
                y = self._member(self.head[e], rec_item)
                if y not in prev:
                    prev[y] = e
                    q.append(y)
        if rec.root_item not in prev:
            raise RuntimeError("complex node member cannot reach its root")
        out = []
        x = rec.root_item
        while prev[x] >= 0:
            e = prev[x]
            out.append(e)
            x = self._member(self.tail[e], rec_item)
        out.reverse()
        return out

    def _connector(self, h: int, r: int) -> list[int]:
        item = h
        while True:
            rec = self.item_parent[item]
            record = self.records[rec - self.n]
            if record.root_node == r and item != record.root_item:
                return self._inner_path(rec, item)
            item = rec

    def _expand(self, start: int, arcs: list[int]) -> list[int]:
        """Insert the internal connectors of complex nodes into a path."""
        out: list[int] = []
        # tasks: ("arc", e) or ("gap", from_node, to_node), consumed from the end
        tasks: list[tuple] = [("gap", self.head[arcs[-1]], self.sink)]
        for i in range(len(arcs) - 1, -1, -1):
            tasks.append(("arc", arcs[i]))
            before = self.head[arcs[i - 1]] if i else start
            tasks.append(("gap", before, self.tail[arcs[i]]))
        while tasks:
            t = tasks.pop()
            if t[0] == "arc":
                out.append(t[1])
                continue
            _, u, w = t
            if u == w:
                continue
            inner = self._connector(u, w)
            tasks.append(("gap", self.head[inner[-1]], w))
            for i in range(len(inner) - 1, -1, -1):
                tasks.append(("arc", inner[i]))
                before = self.head[inner[i - 1]] if i else u
                tasks.append(("gap", before, self.tail[inner[i]]))
        return out


def solve_mbp(inst: MBPInstance) -> BalancedPathSet:
    """Maximal balanced path-set of a unit-capacity instance.

    Parameters:
        inst: Acyclic instance; capacities are ignored (treated as one).

    Returns:
        Good pairs of arc-disjoint paths, maximal: no further good pair fits
        in the unused arcs.

    Raises:
        ValueError: If the instance is malformed.
    """
    check_mbp_instance(inst)
    found: list[GoodPair] = []

    def take(q: list[int], r: list[int]) -> list[int]:
        found.append(GoodPair(tuple(q), tuple(r)))
        return q + r

    eng = _Engine(inst.node_count, inst.tail, inst.head, [True] * inst.arc_count, inst.sink, inst.pairs, take)
    eng.run()
    return BalancedPathSet(tuple(found))


def solve_bbf(inst: MBPInstance) -> BalancedPathSet:
    """Balanced blocking flow as weighted good pairs.

    Every arc ``e`` is split into parallel halves of capacity ``ceil(u/2)``
    and ``floor(u/2)``; good pairs are searched in the split graph, and each
    found pair receives the largest weight the capacities allow.

    Raises:
        ValueError: If the instance is malformed.
    """
    check_mbp_instance(inst)
    m = inst.arc_count
    room = list(inst.cap)
    tail = [inst.tail[e // 2] for e in range(2 * m)]
    head = [inst.head[e // 2] for e in range(2 * m)]
    present = [e % 2 == 0 or room[e // 2] >= 2 for e in range(2 * m)]
    found: list[GoodPair] = []

    def take(q: list[int], r: list[int]) -> list[int]:
        count: dict[int, int] = {}
        for e in q + r:
            count[e // 2] = count.get(e // 2, 0) + 1
        alpha = min(room[g] // c for g, c in count.items())
        assert alpha > 0
        gone = []
        for g, c in count.items():
            room[g] -= alpha * c
            if room[g] == 0:
                gone += [2 * g, 2 * g + 1]
            elif room[g] == 1:
                gone.append(2 * g + 1)
        found.append(GoodPair(tuple(e // 2 for e in q), tuple(e // 2 for e in r), alpha))
        return gone

    eng = _Engine(inst.node_count, tail, head, present, inst.sink, inst.pairs, take)
    eng.run()
    return BalancedPathSet(tuple(found))


# -- reduction from acyclic skew-symmetric networks ----------------------------------


@dataclass(frozen=True)
class MBPReduction:
    """An MBP instance together with the arc correspondence back to the network.

    ``origin[e]`` is the network arc that instance arc ``e`` stands for;
    ``mirrored[e]`` tells whether the mate of that arc carries the same flow
    through the same instance arc (true for arcs not cut at zero potential).
    """

    instance: MBPInstance
    origin: tuple[int, ...]
    mirrored: tuple[bool, ...]
    potential: tuple[int, ...] = field(repr=False, default=())


def _topological_index(net: SkewSymmetricNetwork, arcs: Sequence[int]) -> list[int]:
    n = net.node_count
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a in arcs:
        indeg[net.head[a]] += 1
        out[net.tail[a]].append(net.head[a])
    q = deque(v for v in range(n) if indeg[v] == 0)
    order = [0] * n
    k = 0
    while q:
        x = q.popleft()
        order[x] = k
        k += 1
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                q.append(y)
    if k != n:
        raise ValueError("network is not acyclic")
    return order


def to_mbp_instance(net: SkewSymmetricNetwork) -> MBPReduction:
    """Reduce an acyclic skew-symmetric network to an MBP instance.

    Arcs of zero capacity are ignored.  Nodes get an antisymmetric potential
    increasing along arcs; arcs from negative to positive potential are cut
    by a new zero-potential source, and the instance keeps the
    non-negative half of the graph with the sink as target.

    Raises:
        ValueError: If the positive-capacity arcs contain a cycle.
    """
    arcs = [a for a in range(net.arc_count) if net.cap[a] > 0]
    q = _topological_index(net, arcs)
    pot = [q[v] - q[v ^ 1] for v in range(net.node_count)]
    ids: dict[int, int] = {}

    def node(v: int) -> int:
        return ids.setdefault(v, len(ids))

    node(SINK)
    tail: list[int] = []
    head: list[int] = []
    cap: list[int] = []
    origin: list[int] = []
    mirrored: list[bool] = []
    zero: dict[int, int] = {}
    n_extra = 0
    for a in arcs:
        x, y = net.tail[a], net.head[a]
        if pot[x] > 0:
            tail.append(node(x))
            mirrored.append(True)
        elif pot[y] > 0:
            zero[a] = n_extra
            n_extra += 1
            tail.append(-1 - zero[a])  # patched below
            mirrored.append(False)
        else:
            continue
        head.append(node(y))
        cap.append(net.cap[a])
        origin.append(a)
    base = len(ids)
    tail = [t if t >= 0 else base + (-1 - t) for t in tail]
    pairs = []
    for a, k in zero.items():
        b = net.mate[a]
        if a < b:
            pairs.append((base + k, base + zero[b]))
    inst = MBPInstance(base + n_extra, tuple(tail), tuple(head), ids[SINK], tuple(pairs), tuple(cap))
    return MBPReduction(inst, tuple(origin), tuple(mirrored), tuple(pot))


def _prune(net: SkewSymmetricNetwork) -> SkewSymmetricNetwork:
    """Zero out arcs that lie on no source-to-sink path of positive capacity."""
    n = net.node_count
    fwd = [False] * n
    bwd = [False] * n
    fwd[SOURCE] = True
    bwd[SINK] = True
    stack = [SOURCE]
    while stack:
        x = stack.pop()
        for a in net.out_arcs[x]:
            if net.cap[a] > 0 and not fwd[net.head[a]]:
                fwd[net.head[a]] = True
                stack.append(net.head[a])
    stack = [SINK]
    while stack:
        y = stack.pop()
        for a in net.in_arcs[y]:
            if net.cap[a] > 0 and not bwd[net.tail[a]]:
                bwd[net.tail[a]] = True
                stack.append(net.tail[a])
    caps = [c if c > 0 and fwd[net.tail[a]] and bwd[net.head[a]] else 0 for a, c in enumerate(net.cap)]
    return net.with_caps(caps)


def totally_blocking_isflow(net: SkewSymmetricNetwork) -> ISFlow:
    """IS-flow after which no regular source-sink path has spare capacity.

    Parameters:
        net: Skew-symmetric network whose positive-capacity arcs form an
            acyclic graph.

    Returns:
        A feasible IS-flow that is totally blocking.

    Raises:
        ValueError: If the positive-capacity arcs contain a cycle.
    """
    pruned = _prune(net)
    red = to_mbp_instance(pruned)
    inst = red.instance
    if all(c == 1 for c in inst.cap):
        paths = solve_mbp(inst)
    else:
        paths = solve_bbf(inst)
    load = paths.load(inst)
    values = [0] * net.arc_count
    for e, w in enumerate(load):
        if w:
            a = red.origin[e]
            values[a] += w
            if red.mirrored[e]:
                values[net.mate[a]] += w
    return ISFlow.from_values(net, values)
