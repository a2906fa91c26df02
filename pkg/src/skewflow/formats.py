"""Text formats for instances, flows and certificates.

All formats are line based, use 1-indexed node and arc numbers, and treat
lines starting with ``c`` as comments.

``p ssf <nodes> <arcs>``
    Skew-symmetric network.  ``a <tail> <head> <cap>`` lines come in mate
    pairs; node 1 is the source, node 2 the sink, and odd ``v`` is mated
    with ``v + 1``.
``p edge <nodes> <edges>``
    Matching instance.  ``e <u> <v>`` lines, optional ``b <v> <lo> <hi>``
    node bounds and ``u <edge> <lo> <hi>`` edge bounds (``hi`` may be
    ``inf`` for edges).
``p mbp <nodes> <arcs> <pairs>``
    Maximal balanced path-set instance with ``z <z> <z'>`` source pairs,
    one ``t <sink>`` line and ``a <tail> <head> [cap]`` arcs.

A solution file holds ``value <V>``, ``f <arc> <amount>`` lines for arcs
with nonzero flow, and optionally an odd barrier as ``A: ...``,
``X<i>: ...`` and ``capacity <C>`` lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Union

from .blockphase import MBPInstance, check_mbp_instance
from .reductions import MatchingInstance
from .ssgraph import ISFlow, OddBarrier, SkewSymmetricNetwork, validate_network

__all__ = [
    "FormatError",
    "Instance",
    "Solution",
    "format_edge",
    "format_mbp",
    "format_solution",
    "format_ssf",
    "parse_instance",
    "parse_solution",
    "parse_text",
]

Instance = Union[SkewSymmetricNetwork, MatchingInstance, MBPInstance]


class FormatError(ValueError):
    """Malformed input; ``line`` is the 1-based line number, or 0 for the whole file."""

    def __init__(self, line: int, message: str) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        words = raw.split()
        if words and words[0] != "c":
            yield number, words


def _ints(number: int, words: list[str], count: int | tuple[int, int]) -> list[int]:
    low, high = (count, count) if isinstance(count, int) else count
    if not low <= len(words) <= high:
        wanted = str(low) if low == high else f"{low} to {high}"
        raise FormatError(number, f"expected {wanted} numbers, found {len(words)}")
    try:
        return [int(w) for w in words]
    except ValueError as exc:
        raise FormatError(number, f"not an integer: {exc}") from None


def parse_instance(path: str | Path) -> Instance:
    """Read an instance file; the problem line selects the format.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        FormatError: On malformed content, with the offending line number.
    """
    return parse_text(Path(path).read_text())


def parse_text(text: str) -> Instance:
    """Parse instance text in any supported format.

    Raises:
        FormatError: On malformed content.
    """
    records = list(_records(text))
    if not records or records[0][1][0] != "p" or len(records[0][1]) < 2:
        raise FormatError(records[0][0] if records else 0, "the first record must be a problem line 'p <kind> ...'")
    kind = records[0][1][1]
    readers = {"ssf": _read_ssf, "edge": _read_edge, "mbp": _read_mbp}
    if kind not in readers:
        raise FormatError(records[0][0], f"unknown problem kind '{kind}'")
    return readers[kind](records)


def _read_ssf(records: list[tuple[int, list[str]]]) -> SkewSymmetricNetwork:
    first, words = records[0]
    n, m = _ints(first, words[2:], 2)
    if n < 2 or n % 2:
        raise FormatError(first, "node count must be even and at least 2")
    if m % 2:
        raise FormatError(first, "arc count must be even because arcs come in mate pairs")
    tail: list[int] = []
    head: list[int] = []
    cap: list[int] = []
    lines: list[int] = []
    for number, words in records[1:]:
        if words[0] != "a":
            raise FormatError(number, f"unexpected record '{words[0]}' in an ssf file")
        x, y, c = _ints(number, words[1:], 3)
        if not (1 <= x <= n and 1 <= y <= n):
            raise FormatError(number, "arc endpoint out of range")
        if c < 0:
            raise FormatError(number, "negative capacity")
        tail.append(x - 1)
        head.append(y - 1)
        cap.append(c)
        lines.append(number)
    if len(tail) != m:
        raise FormatError(first, f"declared {m} arcs but found {len(tail)}")
    for a in range(0, m, 2):
        b = a + 1
        if (tail[b], head[b]) != (head[a] ^ 1, tail[a] ^ 1) or cap[a] != cap[b]:
            raise FormatError(lines[b], "arc is not the mate of the arc on the previous line")
    mate = tuple(a ^ 1 for a in range(m))
    net = SkewSymmetricNetwork(n, tuple(tail), tuple(head), tuple(cap), mate)
    problems = validate_network(net)
    if problems:
        raise FormatError(0, "invalid network: " + "; ".join(problems))
    return net


def _read_edge(records: list[tuple[int, list[str]]]) -> MatchingInstance:
    first, words = records[0]
    n, m = _ints(first, words[2:], 2)
    if n < 0 or m < 0:
        raise FormatError(first, "negative size")
    edges: list[tuple[int, int]] = []
    node_bounds: dict[int, tuple[int, int]] = {}
    edge_bounds: dict[int, tuple[int, int | None]] = {}
    for number, words in records[1:]:
        tag = words[0]
        if tag == "e":
            u, v = _ints(number, words[1:], 2)
            if not (1 <= u <= n and 1 <= v <= n):
                raise FormatError(number, "edge endpoint out of range")
            edges.append((u - 1, v - 1))
        elif tag == "b":
            v, lo, hi = _ints(number, words[1:], 3)
            if not 1 <= v <= n:
                raise FormatError(number, "node out of range")
            node_bounds[v - 1] = (lo, hi)
        elif tag == "u":
            if len(words) != 4:
                raise FormatError(number, "expected 'u <edge> <lo> <hi>'")
            idx, lo = _ints(number, words[1:3], 2)
            hi = None if words[3] == "inf" else _ints(number, words[3:], 1)[0]
            edge_bounds[idx - 1] = (lo, hi)
        else:
            raise FormatError(number, f"unexpected record '{tag}' in an edge file")
    if len(edges) != m:
        raise FormatError(first, f"declared {m} edges but found {len(edges)}")
    if any(not 0 <= i < m for i in edge_bounds):
        raise FormatError(0, "edge bound refers to a missing edge")
    try:
        return MatchingInstance(
            n,
            tuple(edges),
            tuple(edge_bounds.get(i, (0, 1)) for i in range(m)),
            tuple(node_bounds.get(v, (0, 1)) for v in range(n)),
        )
    except ValueError as exc:
        raise FormatError(0, str(exc)) from None


def _read_mbp(records: list[tuple[int, list[str]]]) -> MBPInstance:
    first, words = records[0]
    n, m, k = _ints(first, words[2:], 3)
    pairs: list[tuple[int, int]] = []
    sinks: list[int] = []
    tail: list[int] = []
    head: list[int] = []
    cap: list[int] = []

    def node(number: int, v: int) -> int:
        if not 1 <= v <= n:
            raise FormatError(number, f"node {v} out of range")
        return v - 1

    for number, words in records[1:]:
        tag = words[0]
        if tag == "z":
            if len(words) != 3:
                raise FormatError(number, "a source must be listed together with its mate: 'z <z> <z'>'")
            z, zm = _ints(number, words[1:], 2)
            pairs.append((node(number, z), node(number, zm)))
        elif tag == "t":
            (t,) = _ints(number, words[1:], 1)
            sinks.append(node(number, t))
        elif tag == "a":
            vals = _ints(number, words[1:], (2, 3))
            tail.append(node(number, vals[0]))
            head.append(node(number, vals[1]))
            cap.append(vals[2] if len(vals) == 3 else 1)
        else:
            raise FormatError(number, f"unexpected record '{tag}' in an mbp file")
    if len(sinks) != 1:
        raise FormatError(first, "exactly one 't' line is required")
    if len(pairs) != k:
        raise FormatError(first, f"declared {k} source pairs but found {len(pairs)}")
    if len(tail) != m:
        raise FormatError(first, f"declared {m} arcs but found {len(tail)}")
    inst = MBPInstance(n, tuple(tail), tuple(head), sinks[0], tuple(pairs), tuple(cap))
    try:
        check_mbp_instance(inst)
    except ValueError as exc:
        raise FormatError(0, str(exc)) from None
    return inst


# -- writers -----------------------------------------------------------------


def format_ssf(net: SkewSymmetricNetwork, comment: str = "") -> str:
    """Text of a network whose mates are arcs ``2i`` and ``2i+1``.

    Raises:
        ValueError: If arc mates are not positional.
    """
    if any(net.mate[a] != a ^ 1 for a in range(net.arc_count)):
        raise ValueError("arcs must be stored in consecutive mate pairs")
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p ssf {net.node_count} {net.arc_count}")
    lines += [f"a {net.tail[a] + 1} {net.head[a] + 1} {net.cap[a]}" for a in range(net.arc_count)]
    return "\n".join(lines) + "\n"


def format_edge(inst: MatchingInstance, comment: str = "") -> str:
    """Text of a matching instance; default bounds are left implicit."""
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p edge {inst.node_count} {len(inst.edges)}")
    lines += [f"e {v + 1} {w + 1}" for v, w in inst.edges]
    for v, (lo, hi) in enumerate(inst.node_bounds):
        if (lo, hi) != (0, 1):
            lines.append(f"b {v + 1} {lo} {hi}")
    for i, (lo, hi) in enumerate(inst.edge_bounds):
        if (lo, hi) != (0, 1):
            lines.append(f"u {i + 1} {lo} {'inf' if hi is None else hi}")
    return "\n".join(lines) + "\n"


def format_mbp(inst: MBPInstance, comment: str = "") -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p mbp {inst.node_count} {inst.arc_count} {len(inst.pairs)}")
    lines += [f"z {z + 1} {zm + 1}" for z, zm in inst.pairs]
    lines.append(f"t {inst.sink + 1}")
    lines += [f"a {x + 1} {y + 1} {c}" for x, y, c in zip(inst.tail, inst.head, inst.cap)]
    return "\n".join(lines) + "\n"


# -- solutions -----------------------------------------------------------------


@dataclass(frozen=True)
class Solution:
    """Flow values and an optional barrier read from a solution file."""

    value: int
    values: tuple[int, ...]
    barrier: OddBarrier | None

    def flow(self) -> ISFlow:
        return ISFlow(self.values, self.value)


def format_solution(f: ISFlow, barrier: OddBarrier | None = None, log: Iterable[str] = ()) -> str:
    """Text of a flow and its certificate; ``log`` lines become comments."""
    lines = [f"value {f.value}"]
    lines += [f"f {a + 1} {v}" for a, v in enumerate(f.values) if v]
    if barrier is not None:
        lines.append("A: " + " ".join(str(v + 1) for v in sorted(barrier.A)))
        for i, part in enumerate(barrier.X, start=1):
            lines.append(f"X{i}: " + " ".join(str(v + 1) for v in sorted(part)))
        lines.append(f"capacity {barrier.capacity}")
    lines += [f"c {line}" for line in log]
    return "\n".join(lines) + "\n"


def parse_solution(text: str, arc_count: int) -> Solution:
    """Read a solution for a network with ``arc_count`` arcs.

    Raises:
        FormatError: On malformed or out-of-range records.
    """
    value: int | None = None
    values = [0] * arc_count
    A: list[int] | None = None
    parts: dict[int, list[int]] = {}
    capacity: int | None = None
    for number, words in _records(text):
        tag = words[0]
        if tag == "value":
            (value,) = _ints(number, words[1:], 1)
        elif tag == "f":
            a, v = _ints(number, words[1:], 2)
            if not 1 <= a <= arc_count:
                raise FormatError(number, f"arc {a} out of range")
            values[a - 1] = v
        elif tag == "A:":
            A = [v - 1 for v in _ints(number, words[1:], (0, 1 << 30))]
        elif tag.startswith("X") and tag.endswith(":") and tag[1:-1].isdigit():
            parts[int(tag[1:-1])] = [v - 1 for v in _ints(number, words[1:], (0, 1 << 30))]
        elif tag == "capacity":
            (capacity,) = _ints(number, words[1:], 1)
        else:
            raise FormatError(number, f"unexpected record '{tag}' in a solution file")
    if value is None:
        raise FormatError(0, "missing 'value' line")
    barrier = None
    if A is not None:
        if sorted(parts) != list(range(1, len(parts) + 1)):
            raise FormatError(0, "barrier parts must be numbered X1, X2, ... without gaps")
        if capacity is None:
            raise FormatError(0, "barrier is missing its 'capacity' line")
        barrier = OddBarrier(frozenset(A), tuple(frozenset(parts[i]) for i in sorted(parts)), capacity)
    return Solution(value, tuple(values), barrier)
