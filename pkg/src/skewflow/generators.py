"""Seeded random instances.

Every generator takes a :class:`numpy.random.Generator`; :func:`generate`
builds one from a single integer seed, and :func:`spawn` derives independent
child seeds for batches.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .blockphase import MBPInstance
from .reductions import MatchingInstance
from .ssgraph import SkewSymmetricNetwork

__all__ = ["KINDS", "dense_graph", "generate", "random_graph", "random_mbp", "random_ssf", "spawn"]


def _rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seq))


def spawn(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seed sequences of ``seed``."""
    return np.random.SeedSequence(seed).spawn(count)


def _distinct_edges(rng: np.random.Generator, n: int, m: int) -> list[tuple[int, int]]:
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"cannot place {m} distinct edges on {n} nodes")
    # index k of the upper triangle maps to (v, w) with v < w
    picks = np.sort(rng.choice(total, size=m, replace=False)) if m else np.empty(0, dtype=np.int64)
    edges = []
    for k in picks.tolist():
        v = int((2 * n - 1 - math.isqrt((2 * n - 1) ** 2 - 8 * k)) // 2)
        while v * (2 * n - v - 1) // 2 > k:
            v -= 1
        while (v + 1) * (2 * n - v - 2) // 2 <= k:
            v += 1
        w = k - v * (2 * n - v - 1) // 2 + v + 1
        edges.append((v, w))
    return edges


def random_graph(rng: np.random.Generator, n: int, m: int) -> MatchingInstance:
    """Simple graph with ``m`` distinct edges chosen uniformly.

    Raises:
        ValueError: If ``m`` exceeds ``n(n-1)/2``.
    """
    return MatchingInstance.simple(n, _distinct_edges(rng, n, m))


def dense_graph(rng: np.random.Generator, n: int, exponent: float = 1.8) -> MatchingInstance:
    """Simple graph with ``ceil(n ** exponent)`` edges.

    Raises:
        ValueError: If that many edges do not fit.
    """
    return random_graph(rng, n, math.ceil(n**exponent))


def random_ssf(rng: np.random.Generator, node_pairs: int, arc_pairs: int, max_cap: int = 3) -> SkewSymmetricNetwork:
    """Network with ``2 * arc_pairs`` arcs built as mate pairs; loops excluded.

    Raises:
        ValueError: On fewer than one node pair or a capacity below one.
    """
    if node_pairs < 1 or arc_pairs < 0 or max_cap < 1:
        raise ValueError("need at least one node pair, a nonnegative arc count and max_cap >= 1")
    n = 2 * node_pairs
    pairs = []
    while len(pairs) < arc_pairs:
        x, y = (int(v) for v in rng.integers(0, n, size=2))
        if x != y:
            pairs.append((x, y, int(rng.integers(1, max_cap + 1))))
    return SkewSymmetricNetwork.from_pairs(n, pairs)


def random_mbp(rng: np.random.Generator, nodes: int, arcs: int, pairs: int, max_cap: int = 1) -> MBPInstance:
    """Acyclic instance: sources first, the sink last, arcs point forward.

    Raises:
        ValueError: If the nodes cannot hold the sources, one inner node and the sink.
    """
    if pairs < 1 or nodes < 2 * pairs + 1 or arcs < 0 or max_cap < 1:
        raise ValueError("need nodes >= 2 * pairs + 1, pairs >= 1 and max_cap >= 1")
    sources = 2 * pairs
    sink = nodes - 1
    tail = rng.integers(0, nodes - 1, size=arcs)
    head = rng.integers(np.maximum(tail + 1, sources), nodes)
    cap = rng.integers(1, max_cap + 1, size=arcs)
    zpairs = tuple((2 * i, 2 * i + 1) for i in range(pairs))
    return MBPInstance(nodes, tuple(tail.tolist()), tuple(head.tolist()), sink, zpairs, tuple(cap.tolist()))


KINDS = {
    "random-graph": (random_graph, {"n": 12, "m": 20}),
    "random-ssf": (random_ssf, {"node_pairs": 5, "arc_pairs": 12, "max_cap": 3}),
    "random-mbp": (random_mbp, {"nodes": 12, "arcs": 20, "pairs": 2, "max_cap": 1}),
    "dense": (dense_graph, {"n": 64, "exponent": 1.8}),
}


def generate(kind: str, params: dict[str, Any] | None = None, seed: int | np.random.SeedSequence = 0):
    """Deterministic instance of ``kind`` from ``seed``.

    Parameters:
        kind: One of ``random-graph``, ``random-ssf``, ``random-mbp`` or ``dense``.
        params: Overrides for the generator defaults in :data:`KINDS`.
        seed: Integer seed or a spawned seed sequence.

    Raises:
        ValueError: On an unknown kind, unknown parameters or impossible sizes.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind '{kind}'; choose from {sorted(KINDS)}")
    fn, defaults = KINDS[kind]
    extra = set(params or {}) - set(defaults)
    if extra:
        raise ValueError(f"unknown parameters for {kind}: {sorted(extra)}")
    args = {**defaults, **(params or {})}
    return fn(_rng(seed), **args)
