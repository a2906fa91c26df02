"""Decomposition of an IS-flow into symmetric pairs of paths and cycles."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .ssgraph import SINK, SOURCE, ISFlow, SkewSymmetricNetwork, flow_violations, h_capacity

__all__ = ["ElementaryFlow", "SymmetricDecomposition", "crossing_parity", "symmetric_decomposition"]


@dataclass(frozen=True)
class ElementaryFlow:
    """``delta`` units on a simple path or cycle and the same on its mate."""

    arcs: tuple[int, ...]
    mate_arcs: tuple[int, ...]
    delta: int
    closed: bool

    def nodes(self, net: SkewSymmetricNetwork) -> list[int]:
        nodes = [net.tail[self.arcs[0]]]
        nodes += [net.head[a] for a in self.arcs]
        return nodes


@dataclass(frozen=True)
class SymmetricDecomposition:
    members: tuple[ElementaryFlow, ...]

    def recompose(self, net: SkewSymmetricNetwork) -> list[int]:
        total = [0] * net.arc_count
        for mem in self.members:
            for a in mem.arcs:
                total[a] += mem.delta
            for a in mem.mate_arcs:
                total[a] += mem.delta
        return total

    def __len__(self) -> int:
        return len(self.members)


def symmetric_decomposition(net: SkewSymmetricNetwork, f: ISFlow) -> SymmetricDecomposition:
    """Split ``f`` into at most ``m`` elementary flows.

    A regular path is grown forwards and backwards inside the support of the
    remaining flow until it closes a cycle or joins the terminals; the largest
    symmetric amount is then peeled off.

    Raises:
        ValueError: If ``f`` is not a feasible IS-flow.
    """
    problems = flow_violations(net, f.values)
    if problems:
        raise ValueError("cannot decompose an infeasible flow: " + "; ".join(problems[:3]))
    left = list(f.values)
    mate = net.mate
    members: list[ElementaryFlow] = []
    cursor = 0
    while True:
        while cursor < net.arc_count and left[cursor] == 0:
            cursor += 1
        if cursor == net.arc_count:
            break
        arcs, closed = _grow(net, left, cursor)
        delta = h_capacity(net, left, arcs)
        assert delta > 0
        for a in arcs:
            left[a] -= delta
            left[mate[a]] -= delta
        members.append(ElementaryFlow(tuple(arcs), tuple(mate[a] for a in reversed(arcs)), delta, closed))
        if len(members) > net.arc_count:
            raise RuntimeError("decomposition exceeded the member bound")
    return SymmetricDecomposition(tuple(members))


def _pick(arcs: Iterable[int], left: list[int], mate: tuple[int, ...], used: set[int]) -> int:
    for q in arcs:
        if left[q] > 0 and q not in used and (mate[q] not in used or left[q] >= 2):
            return q
    raise RuntimeError("growth is stuck; the remaining flow is not a feasible IS-flow")


def _grow(net: SkewSymmetricNetwork, left: list[int], start: int) -> tuple[list[int], bool]:
    """Return a regular simple path between terminals or a regular simple cycle."""
    mate = net.mate
    seq: deque[int] = deque([start])
    used = {start}
    first = 0  # absolute position of the first node
    pos = {net.tail[start]: 0}
    y = net.head[start]
    if y in pos:
        return [start], True
    pos[y] = 1
    x = y
    while x not in (SOURCE, SINK):
        q = _pick(net.out_arcs[x], left, mate, used)
        y = net.head[q]
        if y in pos:
            return list(seq)[pos[y] - first:] + [q], True
        seq.append(q)
        used.add(q)
        pos[y] = first + len(seq)
        x = y
    x = net.tail[start]
    while x not in (SOURCE, SINK):
        q = _pick(net.in_arcs[x], left, mate, used)
        y = net.tail[q]
        if y in pos:
            return [q] + list(seq)[: pos[y] - first], True
        seq.appendleft(q)
        used.add(q)
        first -= 1
        pos[y] = first
        x = y
    return list(seq), False


def crossing_parity(net: SkewSymmetricNetwork, f: ISFlow, S: Iterable[int]) -> tuple[int, int]:
    """Total flow entering and leaving a self-symmetric node set.

    Raises:
        ValueError: If ``S`` is not closed under taking mates.
    """
    inside = set(S)
    if any(v ^ 1 not in inside for v in inside):
        raise ValueError("node set is not self-symmetric")
    into = out = 0
    for a in range(net.arc_count):
        t, h = net.tail[a] in inside, net.head[a] in inside
        if h and not t:
            into += f.values[a]
        elif t and not h:
            out += f.values[a]
    return into, out
