"""Regular path search in skew-symmetric graphs.

A regular path never uses an arc together with its mate.  The search grows a
tree of reached nodes from the source and shrinks self-symmetric regions
("fragments", the analogue of blossoms) as soon as they are found.  The same
engine runs in two modes:

* reachability: every arc with positive capacity is usable;
* unit-length shortest paths: a primal-dual layer keeps node potentials and
  fragment weights and only follows arcs whose reduced length is zero.

Labels live on original nodes, so paths are restored by following labels
back to a fragment base, exactly as in blossom-based matching codes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .ssgraph import (
    SOURCE,
    SINK,
    SBarrier,
    SkewSymmetricNetwork,
    Verdict,
    is_regular,
    path_nodes,
)

__all__ = [
    "Fragment",
    "RegularPath",
    "SBarrier",
    "SRAResult",
    "TrimResult",
    "TrimmedZeroGraph",
    "find_regular_path",
    "restore_path",
    "shortest_unit_sra",
    "trim_fragment",
    "verify_barrier",
]

_ROOT, _TREE, _BRIDGE = 0, 1, 2
_LENGTH = 2  # unit arc length, doubled so every potential step stays integral


@dataclass(frozen=True)
class RegularPath:
    """Regular source-sink path given as arc ids."""

    arcs: tuple[int, ...]

    def nodes(self, graph: SkewSymmetricNetwork) -> list[int]:
        return path_nodes(graph, self.arcs, SOURCE)

    def __len__(self) -> int:
        return len(self.arcs)


@dataclass
class Fragment:
    """Self-symmetric node set entered by its base arc."""

    base: int
    base_arc: int
    members: set[int]
    parent: int = -1
    weight: int = 0
    created_at: int = 0


class _Search:
    """Blossom-style regular search; one instance per call."""

    def __init__(self, graph: SkewSymmetricNetwork, shortest: bool) -> None:
        n = graph.node_count
        self.graph = graph
        self.n = n
        self.tail = graph.tail
        self.head = graph.head
        self.mate = graph.mate
        self.active = [c > 0 for c in graph.cap]
        self.out = [[a for a in graph.out_arcs[x] if self.active[a]] for x in range(n)]
        self.shortest = shortest

        self.uf = list(range(n))
        self.infrag = [False] * n
        self.frag_of_rep: dict[int, int] = {}
        self.node_frag = [-1] * n
        self.fragments: list[Fragment] = []

        self.reached = [False] * n
        self.kind = [-1] * n
        self.larc = [-1] * n
        self.lnode = [-1] * n
        self.queue: deque[int] = deque()
        self._mark = [0] * n
        self._stamp = 0

        self.pi = [0] * n
        self.cover = [0] * n
        self.base_weight = [0] * graph.arc_count
        self.elapsed = 0

    # -- structure lookups -------------------------------------------------

    def find(self, x: int) -> int:
        uf = self.uf
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    def top(self, x: int) -> Fragment | None:
        if not self.infrag[x]:
            return None
        return self.fragments[self.frag_of_rep[self.find(x)]]

    def tail_image(self, a: int) -> int:
        x = self.tail[a]
        if not self.infrag[x]:
            return x
        frag = self.fragments[self.frag_of_rep[self.find(x)]]
        return frag.base ^ 1 if a == self.mate[frag.base_arc] else frag.base

    def head_image(self, a: int) -> int:
        y = self.head[a]
        if not self.infrag[y]:
            return y
        frag = self.fragments[self.frag_of_rep[self.find(y)]]
        return frag.base if a == frag.base_arc else frag.base ^ 1

    def internal(self, a: int) -> bool:
        x, y = self.tail[a], self.head[a]
        return self.infrag[x] and self.infrag[y] and self.find(x) == self.find(y)

    def reduced(self, a: int) -> int:
        x, y = self.tail[a], self.head[a]
        bw = self.base_weight
        return (
            _LENGTH + self.pi[x] - self.pi[y] - self.cover[x] - self.cover[y]
            + 2 * bw[a] + 2 * bw[self.mate[a]]
        )

    def parent(self, v: int) -> int:
        if self.kind[v] == _ROOT:
            return -1
        return self.tail_image(self.larc[v])

    # -- main loop ---------------------------------------------------------

    def run(self) -> list[int] | SBarrier:
        self.reached[SOURCE] = True
        self.kind[SOURCE] = _ROOT
        self.queue.append(SOURCE)
        while True:
            found = self._drain()
            if found is not None:
                return found
            if not self.shortest:
                return self._barrier()
            step = self._dual_step()
            if step is None:
                return self._barrier()
            found = self._rescan()
            if found is not None:
                return found

    def _drain(self) -> list[int] | None:
        while self.queue:
            x = self.queue.popleft()
            for a in self.out[x]:
                if self.shortest and self.reduced(a) != 0:
                    continue
                found = self._process(a)
                if found is not None:
                    return found
        return None

    def _process(self, a: int) -> list[int] | None:
        if self.internal(a):
            return None
        tx = self.tail_image(a)
        if not self.reached[tx]:
            return None
        hy = self.head_image(a)
        if self.reached[hy]:
            return None
        if self.reached[hy ^ 1]:
            return self._blossom(tx, hy ^ 1, a)
        assert not self.infrag[hy], "unreached fragment side cannot be entered"
        self.reached[hy] = True
        self.kind[hy] = _TREE
        self.larc[hy] = a
        self.queue.append(hy)
        return None

    def _lca(self, u: int, v: int) -> int:
        self._stamp += 1
        stamp = self._stamp
        mark = self._mark
        while True:
            if u >= 0:
                if mark[u] == stamp:
                    return u
                mark[u] = stamp
                u = self.parent(u)
            if v >= 0:
                if mark[v] == stamp:
                    return v
                mark[v] = stamp
                v = self.parent(v)

    def _climb(self, v: int, stop: int) -> list[int]:
        nodes = []
        while v != stop:
            nodes.append(v)
            v = self.parent(v)
        return nodes

    def _blossom(self, x_img: int, y_mate_img: int, a: int) -> list[int] | None:
        c = self._lca(x_img, y_mate_img)
        if c == SOURCE:
            return self._complete(a)
        side_x = self._climb(x_img, c)
        side_y = self._climb(y_mate_img, c)
        back = self.mate[a]
        fid = len(self.fragments)
        members: set[int] = set()
        fresh: list[int] = []
        for v, bridge in [(v, back) for v in side_x + [c]] + [(v, a) for v in side_y]:
            if self.infrag[v]:
                sub = self.fragments[self.frag_of_rep[self.find(v)]]
                sub.parent = fid
                members |= sub.members
                continue
            w = v ^ 1
            self.kind[w] = _BRIDGE
            self.larc[w] = bridge
            self.lnode[w] = v
            members.add(v)
            members.add(w)
            fresh.append(v)
            fresh.append(w)
            self.queue.append(w)
        root = self.find(c) if self.infrag[c] else c
        old_reps = {self.find(v) for v in side_x + side_y + [c] if self.infrag[v]}
        for r in old_reps:
            del self.frag_of_rep[r]
            if r != root:
                self.uf[r] = root
        for v in fresh:
            self.infrag[v] = True
            self.node_frag[v] = fid
            if v != root:
                self.uf[v] = root
        self.frag_of_rep[root] = fid
        self.fragments.append(Fragment(c, self.larc[c], members, created_at=self.elapsed))
        return None

    def _complete(self, a: int) -> list[int]:
        x, y = self.tail[a], self.head[a]
        first = self.path_between(SOURCE, x)
        second = self.path_between(SOURCE, y ^ 1)
        return first + [a] + [self.mate[b] for b in reversed(second)]

    # -- labels to paths ---------------------------------------------------

    def path_between(self, w: int, v: int) -> list[int]:
        """Arc sequence from ``w`` to ``v`` read off the labels."""
        out: list[int] = []
        stack: list[tuple[int, int, int, bool]] = [(0, w, v, False)]
        limit = 4 * self.n + 4 * self.graph.arc_count + 8
        mate, tail, head = self.mate, self.tail, self.head
        while stack:
            tag, p, q, flip = stack.pop()
            if tag == 1:
                out.append(p)
                if len(out) > limit:
                    raise RuntimeError("label chain does not terminate")
                continue
            if p == q:
                continue
            k = self.kind[q]
            if k == _TREE:
                e = self.larc[q]
                if flip:
                    stack.append((0, p, tail[e], True))
                    stack.append((1, mate[e], 0, False))
                else:
                    stack.append((1, e, 0, False))
                    stack.append((0, p, tail[e], False))
            elif k == _BRIDGE:
                b = self.larc[q]
                n = self.lnode[q]
                if flip:
                    stack.append((0, p, tail[b], True))
                    stack.append((1, mate[b], 0, False))
                    stack.append((0, n, head[b] ^ 1, False))
                else:
                    stack.append((0, n, head[b] ^ 1, True))
                    stack.append((1, b, 0, False))
                    stack.append((0, p, tail[b], False))
            else:
                raise RuntimeError(f"no label leads from {p} to {q}")
        return out

    # -- duals -------------------------------------------------------------

    def _role(self, v: int) -> int:
        if self.reached[v]:
            return 1
        if self.reached[v ^ 1]:
            return -1
        return 0

    def _dual_step(self) -> int | None:
        # hot loop: image and role lookups are inlined
        tail, head, mate, active = self.tail, self.head, self.mate, self.active
        reached, infrag, find = self.reached, self.infrag, self.find
        frag_of_rep, fragments = self.frag_of_rep, self.fragments
        pi, cover, bw = self.pi, self.cover, self.base_weight
        best_r, best_s = 0, 0  # smallest r / s seen so far
        for a in range(len(tail)):
            if not active[a]:
                continue
            x, y = tail[a], head[a]
            xi, yi = x, y
            if infrag[x]:
                rx = find(x)
                if infrag[y] and find(y) == rx:
                    continue
                frag = fragments[frag_of_rep[rx]]
                xi = frag.base ^ 1 if a == mate[frag.base_arc] else frag.base
            if infrag[y]:
                frag = fragments[frag_of_rep[find(y)]]
                yi = frag.base if a == frag.base_arc else frag.base ^ 1
            slope = (1 if reached[yi] else -1 if reached[yi ^ 1] else 0) - (
                1 if reached[xi] else -1 if reached[xi ^ 1] else 0
            )
            if slope >= 0:
                continue
            r = _LENGTH + pi[x] - pi[y] - cover[x] - cover[y] + 2 * bw[a] + 2 * bw[mate[a]]
            assert r > 0, "tight arc left unprocessed"
            if best_s == 0 or r * best_s < best_r * -slope:
                best_r, best_s = r, -slope
        if best_s == 0:
            return None
        if best_r % best_s:
            raise RuntimeError("fractional potential step")
        eps = best_r // best_s
        for v in range(self.n):
            if reached[v] and not infrag[v]:
                pi[v] -= eps
                pi[v ^ 1] += eps
        for fid in set(frag_of_rep.values()):
            frag = fragments[fid]
            assert reached[frag.base]
            frag.weight += eps
            for x in frag.members:
                cover[x] += eps
            bw[frag.base_arc] += eps
        self.elapsed += eps
        return eps

    def _rescan(self) -> list[int] | None:
        tail, head, mate, active = self.tail, self.head, self.mate, self.active
        pi, cover, bw = self.pi, self.cover, self.base_weight
        for a in range(len(tail)):
            if not active[a]:
                continue
            x, y = tail[a], head[a]
            if _LENGTH + pi[x] - pi[y] - cover[x] - cover[y] + 2 * bw[a] + 2 * bw[mate[a]]:
                continue
            if not self.internal(a) and self.reached[self.tail_image(a)]:
                found = self._process(a)
                if found is not None:
                    return found
        return None

    # -- barrier -----------------------------------------------------------

    def _barrier(self) -> SBarrier:
        A = frozenset(v for v in range(self.n) if self.reached[v] and not self.infrag[v])
        reps = sorted(set(self.frag_of_rep))
        group = {r: r for r in reps}

        def gfind(r: int) -> int:
            while group[r] != r:
                group[r] = group[group[r]]
                r = group[r]
            return r

        for r in reps:
            frag = self.fragments[self.frag_of_rep[r]]
            t = self.tail[frag.base_arc]
            if self.infrag[t]:
                group[gfind(r)] = gfind(self.find(t))
        parts: dict[int, set[int]] = {}
        for r in reps:
            parts.setdefault(gfind(r), set()).update(self.fragments[self.frag_of_rep[r]].members)
        X = tuple(frozenset(parts[g]) for g in sorted(parts, key=lambda g: min(parts[g])))
        barrier = SBarrier(A, X)
        verdict = verify_barrier(self.graph, barrier)
        if not verdict:
            raise RuntimeError(f"barrier restoration failed: {verdict.violation}")
        return barrier


def _check_path(graph: SkewSymmetricNetwork, arcs: Sequence[int]) -> None:
    nodes = path_nodes(graph, arcs, SOURCE)
    if nodes[-1] != SINK:
        raise RuntimeError("restored path does not end at the sink")
    if len(set(nodes)) != len(nodes):
        raise RuntimeError("restored path is not simple")
    if not is_regular(graph, arcs):
        raise RuntimeError("restored path is not regular")


def find_regular_path(graph: SkewSymmetricNetwork) -> RegularPath | SBarrier:
    """Find a regular source-sink path or a barrier proving none exists.

    Only arcs with positive capacity are considered.

    Parameters:
        graph: Skew-symmetric graph with source 0 and sink 1.

    Returns:
        A :class:`RegularPath`, or an :class:`SBarrier` that passed
        :func:`verify_barrier`.
    """
    search = _Search(graph, shortest=False)
    out = search.run()
    if isinstance(out, SBarrier):
        return out
    _check_path(graph, out)
    return RegularPath(tuple(out))


def verify_barrier(graph: SkewSymmetricNetwork, barrier: SBarrier) -> Verdict:
    """Check barrier conditions B1-B7 over the positive-capacity arcs.

    Returns:
        A verdict that is falsy and names the first violated condition on failure.
    """
    n = graph.node_count
    A = set(barrier.A)
    where = [-2] * n  # -1: A, i: X_i, -2: unassigned so far
    for v in A:
        where[v] = -1
    if SOURCE not in A:
        return Verdict(False, "(B1) source not in A")
    for i, part in enumerate(barrier.X):
        for v in part:
            if where[v] != -2:
                return Verdict(False, f"(B1) node {v} in two parts")
            where[v] = i
    for v in A:
        if v ^ 1 in A:
            return Verdict(False, f"(B2) node {v} and its mate both in A")
    for i, part in enumerate(barrier.X):
        for v in part:
            if v ^ 1 not in part:
                return Verdict(False, f"(B3) X{i + 1} not self-symmetric at node {v}")
    # role codes: -1 A, -3 mate of A, -4 M, i >= 0 for X_i
    role = list(where)
    for v in range(n):
        if role[v] == -2:
            role[v] = -3 if (v ^ 1) in A else -4
    entering = [0] * len(barrier.X)
    bad6 = bad5 = bad7 = None
    for a in range(graph.arc_count):
        if graph.cap[a] <= 0:
            continue
        rx, ry = role[graph.tail[a]], role[graph.head[a]]
        if rx == -1 and ry >= 0:
            entering[ry] += 1
        if rx >= 0 and ry >= 0 and rx != ry and bad5 is None:
            bad5 = f"(B5) arc {a} joins X{rx + 1} and X{ry + 1}"
        if ((rx >= 0 and ry == -4) or (rx == -4 and ry >= 0)) and bad6 is None:
            bad6 = f"(B6) arc {a} joins a part X_i with M"
        if rx == -1 and ry in (-3, -4) and bad7 is None:
            bad7 = f"(B7) arc {a} leaves A towards A' or M"
    for i, cnt in enumerate(entering):
        if cnt != 1:
            return Verdict(False, f"(B4) {cnt} arcs from A to X{i + 1}")
    for bad in (bad5, bad6, bad7):
        if bad is not None:
            return Verdict(False, bad)
    return Verdict(True)


@dataclass
class TrimmedZeroGraph:
    """Zero-reduced-length arcs after shrinking the weighted fragments.

    ``arcs`` lists the surviving original arc ids; ``tail``/``head`` give
    their endpoints after shrinking.  ``fragments`` holds the maximal
    weighted fragments.
    """

    graph: SkewSymmetricNetwork
    arcs: tuple[int, ...]
    tail: dict[int, int]
    head: dict[int, int]
    nodes: frozenset[int]
    fragments: tuple[Fragment, ...]
    family: tuple[Fragment, ...]
    _search: _Search = field(repr=False)
    _top: dict[int, Fragment] = field(default_factory=dict, repr=False)

    def topological_order(self) -> list[int]:
        """Kahn order of the nodes; raises if a cycle exists."""
        indeg = {v: 0 for v in self.nodes}
        out: dict[int, list[int]] = {v: [] for v in self.nodes}
        for a in self.arcs:
            indeg[self.head[a]] += 1
            out[self.tail[a]].append(self.head[a])
        order = [v for v in sorted(self.nodes) if indeg[v] == 0]
        i = 0
        while i < len(order):
            for y in out[order[i]]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    order.append(y)
            i += 1
        if len(order) != len(self.nodes):
            raise RuntimeError("trimmed zero graph has a cycle")
        return order

    def useful_arcs(self) -> tuple[int, ...]:
        """Arcs lying on some source-sink path."""
        fwd = _reach(self, SOURCE, forward=True)
        bwd = _reach(self, SINK, forward=False)
        return tuple(a for a in self.arcs if self.tail[a] in fwd and self.head[a] in bwd)

    def connector(self, frag: Fragment, x: int) -> list[int]:
        """Path inside ``frag`` from its base node to member ``x``."""
        return self._search.path_between(frag.base, x)

    def fragment_at(self, v: int) -> Fragment | None:
        """Maximal weighted fragment containing ``v``, if any."""
        return self._top.get(v)


def _reach(tz: TrimmedZeroGraph, start: int, forward: bool) -> set[int]:
    adj: dict[int, list[int]] = {}
    for a in tz.arcs:
        x, y = (tz.tail[a], tz.head[a]) if forward else (tz.head[a], tz.tail[a])
        adj.setdefault(x, []).append(y)
    seen = {start}
    todo = [start]
    while todo:
        for y in adj.get(todo.pop(), ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


@dataclass(frozen=True)
class SRAResult:
    """Shortest regular path length, one shortest path and the trimmed zero graph."""

    rdist: int
    path: RegularPath
    tz: TrimmedZeroGraph
    potential: tuple[int, ...]


def shortest_unit_sra(graph: SkewSymmetricNetwork) -> SRAResult | SBarrier:
    """Shortest regular source-sink path under unit arc lengths.

    Returns:
        An :class:`SRAResult` whose ``rdist`` is the minimum number of arcs of
        a regular source-sink path, or an :class:`SBarrier`.
    """
    search = _Search(graph, shortest=True)
    out = search.run()
    if isinstance(out, SBarrier):
        return out
    _check_path(graph, out)
    if len(out) != search.elapsed:
        raise RuntimeError("path length disagrees with the potential gap")
    tz = _build_tz(search)
    potential = tuple(search.pi)
    return SRAResult(len(out), RegularPath(tuple(out)), tz, potential)


def _build_tz(search: _Search) -> TrimmedZeroGraph:
    final = search.elapsed
    frags = search.fragments
    family = [f for f in frags if f.created_at < final]

    def weighted_top(x: int) -> int:
        best = -1
        fid = search.node_frag[x]
        while fid >= 0:
            if frags[fid].created_at < final:
                best = fid
            fid = frags[fid].parent
        return best

    g = search.graph
    top = [weighted_top(x) for x in range(g.node_count)]
    tops = sorted({t for t in top if t >= 0})
    tail: dict[int, int] = {}
    head: dict[int, int] = {}
    arcs = []
    active, mate = search.active, g.mate
    pi, cover, bw = search.pi, search.cover, search.base_weight
    for a in range(g.arc_count):
        if not active[a]:
            continue
        x, y = g.tail[a], g.head[a]
        fx, fy = top[x], top[y]
        if fx >= 0 and fx == fy:
            continue
        # reduced length, inlined
        if _LENGTH + pi[x] - pi[y] - cover[x] - cover[y] + 2 * bw[a] + 2 * bw[mate[a]]:
            continue
        if fx >= 0:
            fr = frags[fx]
            x = fr.base ^ 1 if a == g.mate[fr.base_arc] else fr.base
        if fy >= 0:
            fr = frags[fy]
            y = fr.base if a == fr.base_arc else fr.base ^ 1
        arcs.append(a)
        tail[a] = x
        head[a] = y
    nodes = set()
    for v in range(g.node_count):
        t = top[v]
        if t < 0 or v in (frags[t].base, frags[t].base ^ 1):
            nodes.add(v)
    return TrimmedZeroGraph(
        g, tuple(arcs), tail, head, frozenset(nodes),
        tuple(frags[t] for t in tops), tuple(family), search,
        {v: frags[top[v]] for v in range(g.node_count) if top[v] >= 0},
    )


def restore_path(tz: TrimmedZeroGraph, arcs: Sequence[int]) -> RegularPath:
    """Expand a regular path of the trimmed zero graph into the full graph.

    Raises:
        ValueError: If ``arcs`` is not a regular path of ``tz``.
    """
    g = tz.graph
    if not arcs:
        raise ValueError("empty path")
    members = set(tz.arcs)
    for a in arcs:
        if a not in members:
            raise ValueError(f"arc {a} is not in the trimmed zero graph")
    if not is_regular(g, arcs):
        raise ValueError("path is not regular")
    if tz.tail[arcs[0]] != SOURCE:
        raise ValueError("path does not start at the source")
    for p, q in zip(arcs, arcs[1:]):
        if tz.head[p] != tz.tail[q]:
            raise ValueError(f"arcs {p} and {q} are not consecutive")
    full: list[int] = [arcs[0]]
    for p, q in zip(arcs, arcs[1:]):
        y, x = g.head[p], g.tail[q]
        if y != x:
            full += _inside(tz, p, q)
        full.append(q)
    _check_path(g, full)
    return RegularPath(tuple(full))


def _inside(tz: TrimmedZeroGraph, enter: int, leave: int) -> list[int]:
    g = tz.graph
    frag = tz.fragment_at(g.head[enter])
    assert frag is not None and g.tail[leave] in frag.members
    if enter == frag.base_arc:
        return tz.connector(frag, g.tail[leave])
    assert leave == g.mate[frag.base_arc]
    inner = tz.connector(frag, g.head[enter] ^ 1)
    return [g.mate[b] for b in reversed(inner)]


@dataclass(frozen=True)
class TrimResult:
    """Graph after shrinking one fragment; ``names[i]`` is the original id of arc ``i``."""

    graph: SkewSymmetricNetwork
    names: tuple[int, ...]
    removed: frozenset[int]


def trim_fragment(graph: SkewSymmetricNetwork, members: set[int] | frozenset[int], base_arc: int) -> TrimResult:
    """Shrink a fragment to its base node and the base's mate.

    Arcs leaving the fragment start at the base node, arcs entering it end at
    the base's mate, and arcs inside it are deleted.  The base and anti-base
    arcs are kept unchanged.  Removed nodes stay as isolated ids so mates
    remain positional.

    Raises:
        ValueError: If the node set is not self-symmetric, contains the
            source, or the base arc does not enter it.
    """
    members = set(members)
    if any(v ^ 1 not in members for v in members):
        raise ValueError("fragment is not self-symmetric")
    if SOURCE in members:
        raise ValueError("fragment contains the source")
    if graph.tail[base_arc] in members or graph.head[base_arc] not in members:
        raise ValueError("base arc does not enter the fragment")
    w = graph.head[base_arc]
    anti = graph.mate[base_arc]
    tail, head, cap, names = [], [], [], []
    for a in range(graph.arc_count):
        x, y = graph.tail[a], graph.head[a]
        xin, yin = x in members, y in members
        if a in (base_arc, anti) or (not xin and not yin):
            pass
        elif xin and yin:
            continue
        elif xin:
            x = w
        else:
            y = w ^ 1
        names.append(a)
        tail.append(x)
        head.append(y)
        cap.append(graph.cap[a])
    index = {a: i for i, a in enumerate(names)}
    mate = tuple(index[graph.mate[a]] for a in names)
    trimmed = SkewSymmetricNetwork(graph.node_count, tuple(tail), tuple(head), tuple(cap), mate)
    return TrimResult(trimmed, tuple(names), frozenset(members - {w, w ^ 1}))
