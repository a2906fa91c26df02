"""Independent validators and brute-force oracles.

Nothing here calls the solvers; these routines are the ground truth the
solvers are tested against.  The exhaustive oracles refuse inputs larger than
an :class:`OracleBudget`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .ssgraph import SINK, SOURCE, ISFlow, OddBarrier, SkewSymmetricNetwork, Verdict

if TYPE_CHECKING:
    from .blockphase import MBPInstance
    from .reductions import MatchingInstance


class BudgetExceeded(ValueError):
    """Raised when an input is too large for exhaustive search."""


@dataclass(frozen=True)
class OracleBudget:
    max_node_pairs: int = 10
    max_arcs: int = 24
    max_capacity: int = 3
    trials: int = 1000

    def check_network(self, net: SkewSymmetricNetwork, arc_factor: int = 1) -> None:
        if net.node_count // 2 > self.max_node_pairs:
            raise BudgetExceeded(f"{net.node_count // 2} node pairs exceed {self.max_node_pairs}")
        if net.arc_count > self.max_arcs * arc_factor:
            raise BudgetExceeded(f"{net.arc_count} arcs exceed {self.max_arcs * arc_factor}")


DEFAULT_BUDGET = OracleBudget()


def verify_isflow(net: SkewSymmetricNetwork, f: ISFlow) -> list[str]:
    """Check bounds, symmetry, conservation and the recorded value.

    Returns:
        Violations; empty when ``f`` is a feasible IS-flow of ``net``.
    """
    vals = f.values
    if len(vals) != net.arc_count:
        return [f"flow has {len(vals)} entries for {net.arc_count} arcs"]
    out: list[str] = []
    balance = [0] * net.node_count
    for a in range(net.arc_count):
        v = vals[a]
        if not isinstance(v, int):
            out.append(f"arc {a}: non-integer value {v!r}")
            continue
        if v < 0:
            out.append(f"arc {a}: negative value {v}")
        if v > net.cap[a]:
            out.append(f"arc {a}: value {v} exceeds capacity {net.cap[a]}")
        if vals[net.mate[a]] != v:
            out.append(f"arc {a}: asymmetric (mate {net.mate[a]} carries {vals[net.mate[a]]})")
        balance[net.tail[a]] -= v
        balance[net.head[a]] += v
    for x in range(net.node_count):
        if x not in (SOURCE, SINK) and balance[x]:
            out.append(f"node {x}: inflow minus outflow is {balance[x]}")
    if -balance[SOURCE] != f.value:
        out.append(f"recorded value {f.value} but source sends {-balance[SOURCE]}")
    if balance[SINK] != -balance[SOURCE]:
        out.append("sink does not absorb the source excess")
    return out


def verify_odd_barrier(net: SkewSymmetricNetwork, barrier: OddBarrier) -> Verdict:
    """Check conditions O1-O6 and the recorded capacity of an odd barrier."""
    A = set(barrier.A)
    owner: dict[int, int] = {v: -1 for v in A}
    if SOURCE not in A:
        return Verdict(False, "(O1) source not in A")
    for i, part in enumerate(barrier.X):
        for v in part:
            if v in owner:
                return Verdict(False, f"(O1) node {v} lies in two sets")
            owner[v] = i
    if any(v ^ 1 in A for v in A):
        return Verdict(False, "(O2) A meets its mate set")
    for i, part in enumerate(barrier.X):
        if any(v ^ 1 not in part for v in part):
            return Verdict(False, f"(O3) X{i + 1} is not self-symmetric")

    def region(v: int) -> int:
        # -1 A, -2 mate of A, -3 M, i >= 0 for X_i
        if v in owner:
            return owner[v]
        return -2 if v ^ 1 in A else -3

    into = [0] * len(barrier.X)
    leaving = 0
    o5 = o6 = None
    for a in range(net.arc_count):
        c = net.cap[a]
        rx, ry = region(net.tail[a]), region(net.head[a])
        if rx == -1 and ry != -1:
            leaving += c
            if ry >= 0:
                into[ry] += c
        if c <= 0:
            continue
        if rx >= 0 and ry >= 0 and rx != ry and o5 is None:
            o5 = f"(O5) arc {a} joins X{rx + 1} and X{ry + 1}"
        if ((rx >= 0 and ry == -3) or (rx == -3 and ry >= 0)) and o6 is None:
            o6 = f"(O6) arc {a} joins a set X_i with M"
    for i, c in enumerate(into):
        if c % 2 == 0:
            return Verdict(False, f"(O4) capacity {c} from A to X{i + 1} is even")
    if o5:
        return Verdict(False, o5)
    if o6:
        return Verdict(False, o6)
    capacity = leaving - len(barrier.X)
    if capacity != barrier.capacity:
        return Verdict(False, f"recorded capacity {barrier.capacity} but recomputed {capacity}")
    return Verdict(True)


# -- regular paths -------------------------------------------------------------


def _simple_regular_paths(graph: SkewSymmetricNetwork, best_only: bool) -> int | None:
    """Length of the shortest node-simple regular source-sink path (or any, if not best_only)."""
    out = [[a for a in graph.out_arcs[x] if graph.cap[a] > 0] for x in range(graph.node_count)]
    on_node = [False] * graph.node_count
    on_arc = [False] * graph.arc_count
    best: list[int | None] = [None]
    mate = graph.mate

    def dfs(x: int, depth: int) -> bool:
        if x == SINK:
            if best[0] is None or depth < best[0]:
                best[0] = depth
            return not best_only
        if best[0] is not None and depth + 1 >= best[0]:
            return False
        for a in out[x]:
            y = graph.head[a]
            if on_node[y] or on_arc[mate[a]]:
                continue
            on_node[y] = True
            on_arc[a] = True
            stop = dfs(y, depth + 1)
            on_node[y] = False
            on_arc[a] = False
            if stop:
                return True
        return False

    on_node[SOURCE] = True
    dfs(SOURCE, 0)
    return best[0]


def oracle_rpath(graph: SkewSymmetricNetwork, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Whether some regular source-sink path uses only positive-capacity arcs."""
    budget.check_network(graph, arc_factor=4)
    return _simple_regular_paths(graph, best_only=False) is not None


def oracle_rdist(graph: SkewSymmetricNetwork, budget: OracleBudget = DEFAULT_BUDGET) -> int | None:
    """Fewest arcs on a regular source-sink path, or ``None`` if there is none."""
    budget.check_network(graph, arc_factor=4)
    return _simple_regular_paths(graph, best_only=True)


# -- maximum IS-flow -----------------------------------------------------------


def oracle_max_isflow(net: SkewSymmetricNetwork, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """Maximum IS-flow value by exhaustive search over one arc per mate pair."""
    budget.check_network(net)
    if any(c > budget.max_capacity for c in net.cap):
        raise BudgetExceeded("capacity exceeds the oracle budget")
    reps = [a for a in range(net.arc_count) if a < net.mate[a]]
    # contribution of each representative to every node pair (even node id) and to the source
    effects: list[dict[int, int]] = []
    for a in reps:
        b = net.mate[a]
        eff: dict[int, int] = {}
        for arc in (a, b):
            x, y = net.tail[arc], net.head[arc]
            eff[x] = eff.get(x, 0) + 1
            eff[y] = eff.get(y, 0) - 1
        effects.append(eff)
    order = sorted(range(len(reps)), key=lambda i: max((v >> 1) for v in effects[i]) if effects[i] else 0)
    reps = [reps[i] for i in order]
    effects = [effects[i] for i in order]
    caps = [net.cap[a] for a in reps]
    pairs = net.node_count // 2
    # constraints on node 2k for k >= 1; objective on node 0
    cons = [
        [eff.get(2 * k, 0) for k in range(pairs)]
        for eff in effects
    ]
    k = len(reps)
    lo = [[0] * pairs for _ in range(k + 1)]
    hi = [[0] * pairs for _ in range(k + 1)]
    for i in range(k - 1, -1, -1):
        for j in range(pairs):
            c = cons[i][j] * caps[i]
            lo[i][j] = lo[i + 1][j] + min(0, c)
            hi[i][j] = hi[i + 1][j] + max(0, c)
    touched = [[j for j in range(pairs) if cons[i][j]] for i in range(k)]
    partial = [0] * pairs
    best = [-1]

    def dfs(i: int) -> None:
        if i == k:
            if all(partial[j] == 0 for j in range(1, pairs)) and partial[0] > best[0]:
                best[0] = partial[0]
            return
        if partial[0] + hi[i][0] <= best[0]:
            return
        for v in range(caps[i], -1, -1):
            ok = True
            for j in touched[i]:
                partial[j] += cons[i][j] * v
            for j in touched[i]:
                if j and not (partial[j] + lo[i + 1][j] <= 0 <= partial[j] + hi[i + 1][j]):
                    ok = False
                    break
            if ok:
                dfs(i + 1)
            for j in touched[i]:
                partial[j] -= cons[i][j] * v

    dfs(0)
    return max(best[0], 0)


# -- matchings -----------------------------------------------------------------


def oracle_max_matching(inst: "MatchingInstance", budget: OracleBudget = DEFAULT_BUDGET) -> int | None:
    """Largest total edge value of a bounded matching, or ``None`` if infeasible.

    Edge values range over ``[lower, upper]`` (``None`` as upper means
    unbounded) and node degrees (loops count twice) must lie within the
    node bounds.
    """
    n, edges = inst.node_count, inst.edges
    if n > 2 * budget.max_node_pairs + 4 or len(edges) > budget.max_arcs + 16:
        raise BudgetExceeded("matching instance exceeds the oracle budget")
    hi_cap = [_edge_room(inst, i) if hi is None else min(hi, _edge_room(inst, i)) for i, (lo, hi) in enumerate(inst.edge_bounds)]
    if any(h - lo > budget.max_capacity for h, (lo, _) in zip(hi_cap, inst.edge_bounds) if h >= lo):
        raise BudgetExceeded("edge capacity exceeds the oracle budget")
    deg = [0] * n
    rest = [0] * n  # remaining possible degree from undecided edges
    for i, (v, w) in enumerate(edges):
        rest[v] += hi_cap[i]
        rest[w] += hi_cap[i]
    best: list[int | None] = [None]
    node_lo = [b[0] for b in inst.node_bounds]
    node_hi = [b[1] for b in inst.node_bounds]

    def dfs(i: int, total: int) -> None:
        if i == len(edges):
            if all(node_lo[x] <= deg[x] for x in range(n)):
                if best[0] is None or total > best[0]:
                    best[0] = total
            return
        v, w = edges[i]
        lo, _ = inst.edge_bounds[i]
        top = hi_cap[i]
        rest[v] -= top
        rest[w] -= top
        for val in range(top, lo - 1, -1):
            deg[v] += val
            deg[w] += val
            if deg[v] <= node_hi[v] and deg[w] <= node_hi[w] and deg[v] + rest[v] >= node_lo[v] and deg[w] + rest[w] >= node_lo[w]:
                dfs(i + 1, total + val)
            deg[v] -= val
            deg[w] -= val
        rest[v] += top
        rest[w] += top

    dfs(0, 0)
    return best[0]


def _edge_room(inst: "MatchingInstance", i: int) -> int:
    v, w = inst.edges[i]
    if v == w:
        return inst.node_bounds[v][1] // 2
    return min(inst.node_bounds[v][1], inst.node_bounds[w][1])


# -- good pairs ----------------------------------------------------------------


def _dag_paths(inst: "MBPInstance", start: int, room: Sequence[int]) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for e in range(len(inst.tail)):
        if room[e] > 0:
            out.setdefault(inst.tail[e], []).append(e)
    found: list[list[int]] = []
    path: list[int] = []

    def walk(x: int) -> None:
        if x == inst.sink:
            found.append(list(path))
            return
        for e in out.get(x, ()):
            path.append(e)
            walk(inst.head[e])
            path.pop()

    walk(start)
    return found


def oracle_good_pair_exists(inst: "MBPInstance", room: Sequence[int] | None = None) -> bool:
    """Whether two paths from mate sources fit together in the residual room."""
    if room is None:
        room = inst.cap
    if len(room) > 64 or inst.node_count > 40:
        raise BudgetExceeded("MBP instance exceeds the oracle budget")
    for z, zm in inst.pairs:
        first = _dag_paths(inst, z, room)
        if not first:
            continue
        second = _dag_paths(inst, zm, room)
        for p in first:
            used: dict[int, int] = {}
            for e in p:
                used[e] = used.get(e, 0) + 1
            for q in second:
                if all(used.get(e, 0) + 1 <= room[e] for e in q if e in used):
                    return True
    return False


def weak_duality_holds(net: SkewSymmetricNetwork, flows: Iterable[ISFlow], barriers: Iterable[OddBarrier]) -> bool:
    """Every feasible flow value is bounded by every verified barrier capacity."""
    caps = [b.capacity for b in barriers if verify_odd_barrier(net, b)]
    vals = [f.value for f in flows if not verify_isflow(net, f)]
    return all(v <= c for v in vals for c in caps)
