"""Maximum IS-flow solvers.

All four solvers return a :class:`SolveReport` holding a maximum flow and an
odd-barrier certificate whose capacity equals the flow value.

* ``max_isflow_augmenting``: repeated regular augmenting paths.
* ``max_isflow_sapm``: shortest regular augmenting paths.
* ``max_isflow_anstee``: ordinary max flow, symmetrisation and repair.
* ``max_isflow_sbfm``: phases of shortest blocking IS-flows.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .certify import verify_odd_barrier
from .decompose import symmetric_decomposition
from .regpath import RegularPath, SRAResult, find_regular_path, shortest_unit_sra
from .ssgraph import (
    SINK,
    SOURCE,
    ISFlow,
    OddBarrier,
    SBarrier,
    SkewSymmetricNetwork,
    build_split_graph,
    h_capacity,
    odd_barrier_capacity,
    require_valid,
    residual,
    superpose,
)

__all__ = [
    "OddBarrier",
    "SolveReport",
    "SOLVERS",
    "max_flow_dinic",
    "max_isflow_anstee",
    "max_isflow_augmenting",
    "max_isflow_sapm",
    "max_isflow_sbfm",
    "restore_odd_barrier",
    "transit_capacity",
]


@dataclass
class SolveReport:
    """Maximum flow, its certificate and per-iteration statistics."""

    flow: ISFlow
    certificate: OddBarrier
    iterations: int
    rdists: list[int] = field(default_factory=list)
    stages: dict[str, int] = field(default_factory=dict)
    algorithm: str = ""

    @property
    def value(self) -> int:
        return self.flow.value


def restore_odd_barrier(net: SkewSymmetricNetwork, f: ISFlow, barrier: SBarrier) -> OddBarrier:
    """Turn a barrier of the final split residual graph into an odd barrier.

    The node sets carry over unchanged; only the capacity is recomputed on
    the original network.

    Raises:
        RuntimeError: If the result is not a valid odd barrier of capacity ``|f|``.
    """
    cert = OddBarrier(barrier.A, barrier.X, odd_barrier_capacity(net, barrier.A, len(barrier.X)))
    verdict = verify_odd_barrier(net, cert)
    if not verdict:
        raise RuntimeError(f"restored odd barrier is invalid: {verdict.violation}")
    if cert.capacity != f.value:
        raise RuntimeError(f"odd barrier capacity {cert.capacity} differs from flow value {f.value}")
    return cert


def _split_residual(net: SkewSymmetricNetwork, f: ISFlow):
    res = residual(net, f)
    return res, build_split_graph(res.graph, res.graph.cap)


def _augment_along(net: SkewSymmetricNetwork, f: ISFlow, res_graph: SkewSymmetricNetwork, path: Sequence[int]) -> ISFlow:
    delta = h_capacity(res_graph, res_graph.cap, path)
    assert delta > 0
    g = [0] * res_graph.arc_count
    for a in path:
        g[a] += delta
        g[res_graph.mate[a]] += delta
    return superpose(net, f, g)


def _augment_loop(net: SkewSymmetricNetwork, f: ISFlow, shortest: bool) -> tuple[ISFlow, OddBarrier, int, list[int]]:
    count = 0
    rdists: list[int] = []
    while True:
        res, split = _split_residual(net, f)
        if shortest:
            out = shortest_unit_sra(split.graph)
            if isinstance(out, SRAResult):
                if rdists and out.rdist < rdists[-1]:
                    raise RuntimeError("shortest augmenting path length decreased")
                rdists.append(out.rdist)
                out = out.path
        else:
            out = find_regular_path(split.graph)
        if isinstance(out, SBarrier):
            return f, restore_odd_barrier(net, f, out), count, rdists
        assert isinstance(out, RegularPath)
        path = [split.omega[b] for b in out.arcs]
        f = _augment_along(net, f, res.graph, path)
        count += 1


def max_isflow_augmenting(net: SkewSymmetricNetwork, start: ISFlow | None = None) -> SolveReport:
    """Maximum IS-flow by repeated regular augmenting paths.

    Parameters:
        net: A valid network.
        start: Optional feasible flow to start from.

    Returns:
        The flow with its odd-barrier certificate.
    """
    require_valid(net)
    f = start if start is not None else ISFlow.zero(net)
    f, cert, count, _ = _augment_loop(net, f, shortest=False)
    return SolveReport(f, cert, count, algorithm="aug")


def max_isflow_sapm(net: SkewSymmetricNetwork) -> SolveReport:
    """Maximum IS-flow by shortest regular augmenting paths.

    The recorded path lengths never decrease.
    """
    require_valid(net)
    f, cert, count, rdists = _augment_loop(net, ISFlow.zero(net), shortest=True)
    return SolveReport(f, cert, count, rdists, algorithm="sapm")


# -- ordinary max flow -----------------------------------------------------------


def max_flow_dinic(node_count: int, tail: Sequence[int], head: Sequence[int], cap: Sequence[int], s: int, t: int) -> list[int]:
    """Maximum ordinary flow by blocking flows in level graphs.

    Returns:
        Flow value per input arc.
    """
    m = len(tail)
    # residual arc 2i is arc i, 2i+1 its reverse
    to = [0] * (2 * m)
    rc = [0] * (2 * m)
    adj: list[list[int]] = [[] for _ in range(node_count)]
    for i in range(m):
        to[2 * i] = head[i]
        to[2 * i + 1] = tail[i]
        rc[2 * i] = cap[i]
        adj[tail[i]].append(2 * i)
        adj[head[i]].append(2 * i + 1)
    while True:
        level = [-1] * node_count
        level[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for e in adj[x]:
                if rc[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[x] + 1
                    q.append(to[e])
        if level[t] < 0:
            break
        it = [0] * node_count
        while True:
            pushed = _dinic_push(s, t, adj, to, rc, level, it)
            if not pushed:
                break
    return [rc[2 * i + 1] for i in range(m)]


def _dinic_push(s: int, t: int, adj, to, rc, level, it) -> int:
    """One augmenting path in the level graph, found iteratively."""
    stack: list[int] = []
    x = s
    while True:
        if x == t:
            amount = min(rc[e] for e in stack)
            for e in stack:
                rc[e] -= amount
                rc[e ^ 1] += amount
            return amount
        advanced = False
        lst = adj[x]
        while it[x] < len(lst):
            e = lst[it[x]]
            y = to[e]
            if rc[e] > 0 and level[y] == level[x] + 1:
                stack.append(e)
                x = y
                advanced = True
                break
            it[x] += 1
        if advanced:
            continue
        if not stack:
            return 0
        level[x] = -1  # dead end
        e = stack.pop()
        x = to[e ^ 1]
        it[x] += 1


# -- Anstee-type solver ------------------------------------------------------------


def _half_cycles(net: SkewSymmetricNetwork, odd: set[int]) -> tuple[list[list[tuple[int, int]]], list[list[tuple[int, int]]]]:
    """Split the odd-valued arcs into mate pairs of cycles and self-symmetric cycles.

    Cycles are closed undirected walks given as ``(arc, direction)`` steps,
    direction ``+1`` when the arc is used from tail to head.
    """
    mate, tail, head = net.mate, net.tail, net.head
    alive = set(odd)
    inc: dict[int, list[int]] = {}
    for a in odd:
        inc.setdefault(tail[a], []).append(a)
        inc.setdefault(head[a], []).append(a)
    pointer: dict[int, int] = {v: 0 for v in inc}
    pairs: list[list[tuple[int, int]]] = []
    selfsym: list[list[tuple[int, int]]] = []

    def next_arc(v: int, avoid: int) -> int:
        lst = inc[v]
        i = pointer[v]
        while i < len(lst) and lst[i] not in alive:
            i += 1
        pointer[v] = i
        for j in range(i, len(lst)):
            a = lst[j]
            if a in alive and a != avoid:
                return a
        return -1

    def step(v: int, a: int) -> tuple[int, int]:
        if tail[a] == v:
            return head[a], 1
        return tail[a], -1

    nodes: list[int] = []
    arcs: list[tuple[int, int]] = []
    where: dict[int, int] = {}
    for start in sorted(inc):
        while True:
            if not nodes:
                if next_arc(start, -1) < 0:
                    break
                nodes = [start]
                arcs = []
                where = {start: 0}
            v = nodes[-1]
            a = next_arc(v, arcs[-1][0] if arcs else -1)
            assert a >= 0, "odd arcs must form an eulerian subgraph"
            x, d = step(v, a)
            if x not in where and x ^ 1 not in where:
                nodes.append(x)
                arcs.append((a, d))
                where[x] = len(nodes) - 1
                continue
            if x in where:
                i = where[x]
                cyc = arcs[i:] + [(a, d)]
                pairs.append(cyc)
            else:
                i = where[x ^ 1]
                half = arcs[i:] + [(a, d)]
                cyc = half + [(mate[b], -dd) for b, dd in half]
                selfsym.append(cyc)
            for b, _ in cyc:
                alive.discard(b)
                alive.discard(mate[b])
            for u in nodes[i + 1:]:
                del where[u]
            del nodes[i + 1:]
            del arcs[i:]
            if len(nodes) == 1 and next_arc(nodes[0], -1) < 0:
                nodes = []
    assert not alive
    return pairs, selfsym


def _walk_nodes(net: SkewSymmetricNetwork, start: int, cyc: list[tuple[int, int]]) -> list[int]:
    nodes = [start]
    for a, d in cyc:
        nodes.append(net.head[a] if d > 0 else net.tail[a])
    return nodes


def _cycle_start(net: SkewSymmetricNetwork, cyc: list[tuple[int, int]]) -> int:
    a, d = cyc[0]
    return net.tail[a] if d > 0 else net.head[a]


def _push_symmetric(net: SkewSymmetricNetwork, doubled: list[int], cyc: list[tuple[int, int]]) -> None:
    """Half a unit around ``cyc`` and around its mate (doubled units)."""
    for a, d in cyc:
        doubled[a] += d
        doubled[net.mate[a]] += d


def _rotate(net: SkewSymmetricNetwork, cyc: list[tuple[int, int]], x: int) -> list[tuple[int, int]]:
    nodes = _walk_nodes(net, _cycle_start(net, cyc), cyc)
    i = nodes.index(x)
    return cyc[i:] + cyc[:i]


def _halves(net: SkewSymmetricNetwork, cyc: list[tuple[int, int]], x: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Split a self-symmetric cycle rotated to start at ``x`` at the mate of ``x``."""
    cyc = _rotate(net, cyc, x)
    nodes = _walk_nodes(net, x, cyc)
    j = nodes.index(x ^ 1)
    return cyc[:j], cyc[j:]


def max_isflow_anstee(net: SkewSymmetricNetwork) -> SolveReport:
    """Maximum IS-flow from an ordinary maximum flow.

    The ordinary flow is symmetrised into a half-integral flow, the
    half-integral part is cancelled along cycles, the remaining
    self-symmetric cycles are broken with a small loss, and regular
    augmentations restore optimality.

    Raises:
        ValueError: If the network is invalid.
    """
    require_valid(net)
    g = max_flow_dinic(net.node_count, net.tail, net.head, net.cap, SOURCE, SINK)
    doubled = [g[a] + g[net.mate[a]] for a in range(net.arc_count)]
    stage1 = sum(g[a] for a in net.out_arcs[SOURCE]) - sum(g[a] for a in net.in_arcs[SOURCE])
    odd = {a for a in range(net.arc_count) if doubled[a] % 2}
    pairs, selfsym = _half_cycles(net, odd)
    for cyc in pairs:
        _push_symmetric(net, doubled, cyc)
    # cancel touching self-symmetric cycles two at a time
    remaining = list(selfsym)
    merged = 0
    changed = True
    while changed:
        changed = False
        owner: dict[int, int] = {}
        for idx, cyc in enumerate(remaining):
            for v in _walk_nodes(net, _cycle_start(net, cyc), cyc)[:-1]:
                other = owner.get(v)
                if other is not None and other != idx:
                    c1, c2 = remaining[other], cyc
                    h1, _ = _halves(net, c1, v)
                    _, k2 = _halves(net, c2, v)
                    _push_symmetric(net, doubled, h1 + k2)
                    remaining = [c for i, c in enumerate(remaining) if i not in (idx, other)]
                    merged += 1
                    changed = True
                    break
                owner[v] = idx
            if changed:
                break
    k = len(remaining)
    breaks: list[int] = []
    for cyc in remaining:
        nodes = _walk_nodes(net, _cycle_start(net, cyc), cyc)
        t = min(nodes)
        assert t not in (SOURCE, SINK), "a leftover cycle through a terminal contradicts maximality"
        first, second = _halves(net, cyc, t)
        for a, d in first:
            doubled[a] += d
        for a, d in second:
            doubled[a] -= d
        breaks.append(t)
    assert all(v % 2 == 0 for v in doubled)
    h = [v // 2 for v in doubled]
    f = _extract(net, h, breaks)
    stage3 = f.value
    report = max_isflow_augmenting(net, f)
    report.algorithm = "anstee"
    report.stages = {"max_flow": stage1, "merged_cycle_pairs": merged, "self_symmetric_cycles": k, "after_repair": stage3, "augmentations": report.iterations}
    return report


def _extract(net: SkewSymmetricNetwork, h: list[int], breaks: list[int]) -> ISFlow:
    """Remove the elementary flows that pass through auxiliary source arcs."""
    if not breaks:
        return ISFlow.from_values(net, h)
    extra = [(SOURCE, t, 1) for t in breaks]
    aux = SkewSymmetricNetwork.from_pairs(net.node_count, extra)
    m = net.arc_count
    big = SkewSymmetricNetwork(
        net.node_count,
        net.tail + aux.tail,
        net.head + aux.head,
        net.cap + aux.cap,
        net.mate + tuple(b + m for b in aux.mate),
    )
    values = list(h) + [1] * aux.arc_count
    dec = symmetric_decomposition(big, ISFlow.from_values(big, values))
    for mem in dec.members:
        if any(a >= m for a in mem.arcs) or any(a >= m for a in mem.mate_arcs):
            assert mem.delta == 1
            for a in mem.arcs + mem.mate_arcs:
                values[a] -= 1
    assert all(v == 0 for v in values[m:])
    f = ISFlow.from_values(net, values[:m])
    total = sum(h[a] for a in net.out_arcs[SOURCE]) - sum(h[a] for a in net.in_arcs[SOURCE])
    assert f.value >= total - len(breaks)
    return f


# -- blocking-flow phases --------------------------------------------------------------


def transit_capacity(net: SkewSymmetricNetwork) -> int:
    """Sum over inner nodes of the smaller of total in- and out-capacity."""
    total = 0
    for x in range(2, net.node_count):
        cin = sum(net.cap[a] for a in net.in_arcs[x])
        cout = sum(net.cap[a] for a in net.out_arcs[x])
        total += min(cin, cout)
    return total


def _phase_bound(net: SkewSymmetricNetwork) -> int:
    direct = any(net.head[a] == SINK and net.cap[a] > 0 for a in net.out_arcs[SOURCE])
    return min(net.node_count - 1, math.isqrt(4 * transit_capacity(net)) + int(direct))


def max_isflow_sbfm(net: SkewSymmetricNetwork) -> SolveReport:
    """Maximum IS-flow by phases of shortest blocking IS-flows.

    Each phase computes the trimmed zero graph of the split residual
    network, finds a totally blocking IS-flow in it and routes flow through
    the shrunk fragments.  The shortest augmenting path length strictly
    increases between phases, and the phase count is checked against the
    transit-capacity bound.

    Raises:
        RuntimeError: If a phase discipline check fails.
    """
    from .blockphase import totally_blocking_isflow

    require_valid(net)
    f = ISFlow.zero(net)
    rdists: list[int] = []
    bound = _phase_bound(net)
    while True:
        res, split = _split_residual(net, f)
        out = shortest_unit_sra(split.graph)
        if isinstance(out, SBarrier):
            cert = restore_odd_barrier(net, f, out)
            break
        if rdists and out.rdist <= rdists[-1]:
            raise RuntimeError(f"phase distance did not increase: {rdists[-1]} then {out.rdist}")
        rdists.append(out.rdist)
        if len(rdists) > bound:
            raise RuntimeError(f"phase count {len(rdists)} exceeds bound {bound}")
        g = _phase_flow(net, res, split, out, totally_blocking_isflow)
        f = superpose(net, f, g)
    return SolveReport(f, cert, len(rdists), rdists, algorithm="sbfm")


def _phase_flow(net, res, split, sra: SRAResult, blocking) -> list[int]:
    """Shortest blocking IS-flow of the residual network, indexed over ``G+``."""
    tz = sra.tz
    rg = res.graph
    useful = tz.useful_arcs()
    chosen: dict[int, int] = {}  # residual arc -> representative split arc
    for b in useful:
        e = split.omega[b]
        chosen.setdefault(e, b)
    useful_set = set(useful)
    for e, b in chosen.items():
        parts = [p for p in (split.first[e], split.second[e]) if p >= 0]
        inside = [p in useful_set for p in parts]
        if any(inside) and not all(inside):
            raise RuntimeError(f"split halves of residual arc {e} disagree")
    for frag in tz.fragments:
        if rg.cap[split.omega[frag.base_arc]] != 1:
            raise RuntimeError("fragment base arc is not critical")
    # compact node ids that keep mates positional
    pair_id: dict[int, int] = {0: 0}
    for e in sorted(chosen):
        b = chosen[e]
        for v in (tz.tail[b], tz.head[b]):
            pair_id.setdefault(v >> 1, len(pair_id))
    order = sorted(chosen)
    index = {e: i for i, e in enumerate(order)}
    h_tail = tuple(2 * pair_id[tz.tail[chosen[e]] >> 1] + (tz.tail[chosen[e]] & 1) for e in order)
    h_head = tuple(2 * pair_id[tz.head[chosen[e]] >> 1] + (tz.head[chosen[e]] & 1) for e in order)
    h_cap = tuple(rg.cap[e] for e in order)
    h_mate = tuple(index[rg.mate[e]] for e in order)
    compact = SkewSymmetricNetwork(2 * len(pair_id), h_tail, h_head, h_cap, h_mate)
    gbar = blocking(compact)
    g = [0] * rg.arc_count
    for e in order:
        g[e] = gbar.values[index[e]]
    for frag in tz.fragments:
        e_base = split.omega[frag.base_arc]
        if e_base not in index or g[e_base] == 0:
            continue
        leaving = [e for e in order if g[e] > 0 and tz.tail[chosen[e]] == frag.base]
        if sum(g[e] for e in leaving) != 1:
            raise RuntimeError("flow through a fragment base is not a single unit")
        x = rg.tail[leaving[0]]
        for b in tz.connector(frag, x):
            e = split.omega[b]
            g[e] += 1
            g[rg.mate[e]] += 1
    return g


SOLVERS = {
    "aug": max_isflow_augmenting,
    "sapm": max_isflow_sapm,
    "anstee": max_isflow_anstee,
    "sbfm": max_isflow_sbfm,
}
