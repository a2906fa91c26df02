"""Command line front end.

Every command self-checks its result and exits with

* 0 when the result passed every check,
* 1 when a check failed (or ``verify`` found a violation),
* 2 on unusable input,
* 3 when a bounded matching instance has no feasible solution.

``--report PATH`` appends one JSON object per run.  Reports carry a schema
version; everything except the ``timings`` field is deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from .blockphase import BalancedPathSet, MBPInstance, solve_bbf, solve_mbp
from .certify import BudgetExceeded, OracleBudget, oracle_good_pair_exists, oracle_max_isflow, verify_isflow, verify_odd_barrier
from .compress import compress_matching, decompress_flow, measured_ratio
from .decompose import symmetric_decomposition
from .formats import (
    FormatError,
    Instance,
    format_edge,
    format_mbp,
    format_solution,
    format_ssf,
    parse_instance,
    parse_solution,
)
from .generators import KINDS, generate, spawn
from .reductions import MatchingInstance, flow_to_matching, matching_to_network, solve_matching
from .regpath import RegularPath, find_regular_path, verify_barrier
from .solvers import SOLVERS, SolveReport
from .ssgraph import ISFlow, SkewSymmetricNetwork, is_regular, odd_barrier_capacity, path_nodes

__all__ = ["REPORT_SCHEMA", "RunConfig", "build_parser", "main", "run"]

REPORT_SCHEMA = "skewflow.report/1"

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3


@dataclass
class RunConfig:
    """One invocation; results depend only on these fields."""

    command: str
    inputs: list[str] = field(default_factory=list)
    algorithm: str = "sbfm"
    seed: int = 0
    output: str | None = None
    report: str | None = None
    delta: float = 0.25
    compress: bool = False
    kind: str = ""
    params: dict[str, Any] = field(default_factory=dict)
    sizes: list[tuple[int, int]] = field(default_factory=list)
    repeat: int = 1
    oracle: bool = False
    budget: OracleBudget = field(default_factory=OracleBudget)


class _Run:
    """Output buffer, check ledger and report for one command."""

    def __init__(self, cfg: RunConfig) -> None:
        self.cfg = cfg
        self.lines: list[str] = []
        self.checks: dict[str, bool] = {}
        self.problems: list[str] = []
        self.fields: dict[str, Any] = {}
        self.timings: dict[str, float] = {}
        self.status = EXIT_OK

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and bool(ok)
        if not ok:
            self.problems.append(f"{name}: {detail}" if detail else name)

    def timed(self, name: str, fn: Callable[[], Any]) -> Any:
        start = time.perf_counter()
        out = fn()
        self.timings[name] = self.timings.get(name, 0.0) + time.perf_counter() - start
        return out

    def finish(self) -> int:
        if self.problems and self.status == EXIT_OK:
            self.status = EXIT_CHECK
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.cfg.output:
            Path(self.cfg.output).write_text(text)
        else:
            sys.stdout.write(text)
        for p in self.problems:
            print(f"check failed: {p}", file=sys.stderr)
        if self.cfg.report:
            record = {
                "schema": REPORT_SCHEMA,
                "command": self.cfg.command,
                "inputs": self.cfg.inputs,
                "algorithm": self.cfg.algorithm,
                "seed": self.cfg.seed,
                **self.fields,
                "checks": self.checks,
                "ok": not self.problems,
                "exit": self.status,
                "timings": {k: round(v, 6) for k, v in self.timings.items()},
            }
            with open(self.cfg.report, "a") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return self.status


def _finite(x: float) -> float | None:
    # JSON has no NaN or infinity
    return x if math.isfinite(x) else None


def _nodes(vs: Sequence[int]) -> str:
    return " ".join(str(v + 1) for v in vs)


def _load(cfg: RunConfig, index: int = 0) -> Instance:
    if len(cfg.inputs) <= index:
        raise FormatError(0, f"{cfg.command} needs an input file")
    return parse_instance(cfg.inputs[index])


def _as_network(inst: Instance) -> SkewSymmetricNetwork:
    if isinstance(inst, SkewSymmetricNetwork):
        return inst
    if isinstance(inst, MatchingInstance):
        bounded, _ = matching_to_network(inst)
        if bounded.has_lower:
            raise FormatError(0, "instance has lower bounds; use the bmatch command")
        return bounded.net
    raise FormatError(0, "expected an ssf or edge instance")


def _certify(run: _Run, net: SkewSymmetricNetwork, rep: SolveReport) -> None:
    """Feasibility, barrier validity and equal value/capacity."""
    problems = verify_isflow(net, rep.flow)
    run.check("flow_feasible", not problems, "; ".join(problems[:3]))
    verdict = verify_odd_barrier(net, rep.certificate)
    run.check("barrier_valid", verdict.ok, verdict.violation or "")
    run.check("strong_duality", rep.value == rep.certificate.capacity, f"value {rep.value} vs capacity {rep.certificate.capacity}")


def _oracle(run: _Run, net: SkewSymmetricNetwork, value: int) -> None:
    try:
        best = oracle_max_isflow(net, run.cfg.budget)
    except BudgetExceeded as exc:
        run.fields["oracle"] = f"skipped: {exc}"
        return
    run.fields["oracle"] = best
    run.check("oracle_optimum", best == value, f"solver {value} vs oracle {best}")


def _solve(run: _Run, net: SkewSymmetricNetwork) -> SolveReport:
    solver = SOLVERS[run.cfg.algorithm]
    rep = run.timed("solve", lambda: solver(net))
    run.timed("verify", lambda: _certify(run, net, rep))
    if run.cfg.oracle:
        _oracle(run, net, rep.value)
    run.fields.update(value=rep.value, iterations=rep.iterations, rdists=list(rep.rdists), stages=dict(rep.stages))
    return rep


def _solve_log(rep: SolveReport) -> list[str]:
    log = [f"algorithm {rep.algorithm} iterations {rep.iterations}"]
    log += [f"phase {i} rdist {d}" for i, d in enumerate(rep.rdists, start=1)]
    log += [f"stage {k} {v}" for k, v in rep.stages.items()]
    return log


# -- commands ------------------------------------------------------------------


def _cmd_solve(run: _Run) -> None:
    net = _as_network(_load(run.cfg))
    rep = _solve(run, net)
    run.lines.append(format_solution(rep.flow, rep.certificate, _solve_log(rep)).rstrip("\n"))


def _matching_lines(run: _Run, inst: MatchingInstance, values: Sequence[int], word: str) -> None:
    deg = inst.degrees(values)
    bad_nodes = [v for v, (lo, hi) in enumerate(inst.node_bounds) if not lo <= deg[v] <= hi]
    bad_edges = [i for i, (lo, hi) in enumerate(inst.edge_bounds) if values[i] < lo or (hi is not None and values[i] > hi)]
    run.check("bounds_respected", not bad_nodes and not bad_edges, f"nodes {bad_nodes[:5]} edges {bad_edges[:5]}")
    size = sum(values)
    run.fields["size"] = size
    run.lines.append(f"{word} {size}")
    for i, x in enumerate(values):
        if x:
            v, w = inst.edges[i]
            run.lines.append(f"m {v + 1} {w + 1}" if word == "matching" else f"x {i + 1} {v + 1} {w + 1} {x}")


def _simplified(inst: MatchingInstance) -> tuple[MatchingInstance, list[int]]:
    """Loop-free instance without repeated edges, and each kept edge's first index."""
    first: dict[tuple[int, int], int] = {}
    for i, (v, w) in enumerate(inst.edges):
        if v != w:
            first.setdefault((min(v, w), max(v, w)), i)
    keys = sorted(first)
    return MatchingInstance.simple(inst.node_count, keys), [first[k] for k in keys]


def _cmd_match(run: _Run) -> None:
    inst = _load(run.cfg)
    if not isinstance(inst, MatchingInstance):
        raise FormatError(0, "match expects an edge instance")
    if any(b != (0, 1) for b in inst.edge_bounds + inst.node_bounds):
        raise FormatError(0, "match handles plain matchings; use bmatch for bounds")
    simple, keep = _simplified(inst)
    bounded, bm = matching_to_network(simple)
    if run.cfg.compress:
        st = run.timed("compress", lambda: compress_matching(simple, run.cfg.delta))
        rep = _solve(run, st.net)
        flow = decompress_flow(rep.flow, st)
        run.fields.update(
            original_arcs=st.original.arc_count,
            compressed_arcs=st.net.arc_count,
            measured_ratio=_finite(measured_ratio(st)),
        )
        run.lines.append(f"c arcs original {st.original.arc_count} compressed {st.net.arc_count}")
    else:
        rep = _solve(run, bounded.net)
        flow = rep.flow
    simple_values = flow_to_matching(flow, bm)
    values = [0] * len(inst.edges)
    for j, i in enumerate(keep):
        values[i] = simple_values[j]
    run.check("value_is_twice_size", flow.value == 2 * sum(values), f"flow {flow.value} vs matching {sum(values)}")
    _matching_lines(run, inst, values, "matching")


def _cmd_bmatch(run: _Run) -> None:
    inst = _load(run.cfg)
    if not isinstance(inst, MatchingInstance):
        raise FormatError(0, "bmatch expects an edge instance")
    bounded, bm = matching_to_network(inst)
    if not bounded.has_lower:
        rep = _solve(run, bounded.net)
        values = flow_to_matching(rep.flow, bm)
    else:
        solver = SOLVERS[run.cfg.algorithm]
        res = run.timed("solve", lambda: solve_matching(inst, solver))
        if not res.feasible:
            run.status = EXIT_INFEASIBLE
            run.fields["feasible"] = False
            run.lines.append("infeasible")
            return
        values = list(res.values)
    run.fields["feasible"] = True
    _matching_lines(run, inst, values, "bmatching")


def _cmd_rpath(run: _Run) -> None:
    net = _as_network(_load(run.cfg))
    out = run.timed("solve", lambda: find_regular_path(net))
    if isinstance(out, RegularPath):
        ok = is_regular(net, out.arcs) and all(net.cap[a] > 0 for a in out.arcs)
        run.check("path_regular", ok)
        run.fields.update(found=True, length=len(out))
        run.lines.append("path " + _nodes(out.nodes(net)))
    else:
        verdict = verify_barrier(net, out)
        run.check("barrier_valid", verdict.ok, verdict.violation or "")
        run.fields.update(found=False, parts=len(out.X))
        run.lines.append("A: " + _nodes(sorted(out.A)))
        run.lines += [f"X{i}: " + _nodes(sorted(part)) for i, part in enumerate(out.X, start=1)]


def _check_pathset(run: _Run, inst: MBPInstance, ps: BalancedPathSet) -> None:
    mates = {}
    for z, zm in inst.pairs:
        mates[z], mates[zm] = zm, z
    ok = True
    for p in ps.pairs:
        for path in (p.first, p.second):
            ok &= bool(path) and inst.head[path[-1]] == inst.sink
            ok &= all(inst.head[a] == inst.tail[b] for a, b in zip(path, path[1:]))
        ok &= bool(p.first and p.second) and mates.get(inst.tail[p.first[0]]) == inst.tail[p.second[0]]
    run.check("pairs_balanced", ok)
    load = ps.load(inst)
    run.check("capacities_respected", all(x <= c for x, c in zip(load, inst.cap)))
    if run.cfg.oracle:
        try:
            room = [c - x for c, x in zip(inst.cap, load)]
            run.check("maximal", not oracle_good_pair_exists(inst, room))
        except BudgetExceeded as exc:
            run.fields["oracle"] = f"skipped: {exc}"


def _cmd_mbp(run: _Run) -> None:
    inst = _load(run.cfg)
    if not isinstance(inst, MBPInstance):
        raise FormatError(0, "mbp expects an mbp instance")
    unit = all(c == 1 for c in inst.cap)
    ps = run.timed("solve", lambda: (solve_mbp if unit else solve_bbf)(inst))
    run.timed("verify", lambda: _check_pathset(run, inst, ps))
    run.fields.update(pairs=len(ps), weight=sum(p.weight for p in ps.pairs), variant="unit" if unit else "capacitated")
    run.lines.append(f"pairs {len(ps)}")
    for i, p in enumerate(ps.pairs, start=1):
        run.lines.append(f"pair {i} {p.weight}")
        for path in (p.first, p.second):
            run.lines.append("path " + _nodes([inst.tail[path[0]]] + [inst.head[a] for a in path]))


def _cmd_decompose(run: _Run) -> None:
    net = _as_network(_load(run.cfg))
    if len(run.cfg.inputs) > 1:
        sol = parse_solution(Path(run.cfg.inputs[1]).read_text(), net.arc_count)
        flow = ISFlow.from_values(net, sol.values)
        problems = verify_isflow(net, flow)
        if problems:
            raise FormatError(0, "flow is infeasible: " + "; ".join(problems[:3]))
    else:
        flow = _solve(run, net).flow
    dec = run.timed("decompose", lambda: symmetric_decomposition(net, flow))
    run.check("recomposes", list(dec.recompose(net)) == list(flow.values))
    run.check("member_bound", len(dec) <= net.arc_count, f"{len(dec)} members for {net.arc_count} arcs")
    run.fields.update(members=len(dec), value=flow.value)
    for mem in dec.members:
        word = "cycle" if mem.closed else "path"
        run.lines.append(f"{word} {mem.delta} " + _nodes(path_nodes(net, mem.arcs, net.tail[mem.arcs[0]])))


def _cmd_compress(run: _Run) -> None:
    inst = _load(run.cfg)
    if not isinstance(inst, MatchingInstance):
        raise FormatError(0, "compress expects an edge instance")
    st = run.timed("compress", lambda: compress_matching(_simplified(inst)[0], run.cfg.delta))
    big = [c for c in st.partition.cliques if c.arc_count > 1]
    ratio = measured_ratio(st)
    run.fields.update(
        original_arcs=st.original.arc_count,
        compressed_arcs=st.net.arc_count,
        cliques=len(big) // 2,
        measured_ratio=_finite(ratio),
    )
    run.lines += [
        f"nodes {inst.node_count} edges {len(st.layer) // 2}",
        f"arcs original {st.original.arc_count} compressed {st.net.arc_count}",
        f"cliques {len(big) // 2} partition_size {st.partition.size}",
        f"ratio {ratio:.4f}",
    ]
    if len(run.cfg.inputs) > 1:
        Path(run.cfg.inputs[1]).write_text(format_ssf(st.net, "star-compressed matching network"))


def _cmd_verify(run: _Run) -> None:
    if len(run.cfg.inputs) < 2:
        raise FormatError(0, "verify needs an instance and a solution file")
    net = _as_network(_load(run.cfg))
    sol = parse_solution(Path(run.cfg.inputs[1]).read_text(), net.arc_count)
    barrier = sol.barrier
    if len(run.cfg.inputs) > 2:
        barrier = parse_solution(Path(run.cfg.inputs[2]).read_text(), net.arc_count).barrier or barrier
    problems = verify_isflow(net, sol.flow())
    run.check("flow_feasible", not problems, "; ".join(problems[:5]))
    if barrier is None:
        run.lines.append(f"flow feasible, value {sol.value}, no certificate" if not problems else "flow infeasible")
        return
    verdict = verify_odd_barrier(net, barrier)
    run.check("barrier_valid", verdict.ok, verdict.violation or "")
    actual = odd_barrier_capacity(net, barrier.A, len(barrier.X))
    run.check("capacity_matches", actual == barrier.capacity, f"stated {barrier.capacity}, recomputed {actual}")
    run.check("strong_duality", sol.value == actual, f"value {sol.value} vs capacity {actual}")
    run.lines.append("optimal" if not run.problems else "rejected")


def _cmd_gen(run: _Run) -> None:
    inst = generate(run.cfg.kind, run.cfg.params, run.cfg.seed)
    note = f"{run.cfg.kind} seed {run.cfg.seed} " + " ".join(f"{k}={v}" for k, v in sorted(run.cfg.params.items()))
    if isinstance(inst, MatchingInstance):
        text = format_edge(inst, note.strip())
    elif isinstance(inst, MBPInstance):
        text = format_mbp(inst, note.strip())
    else:
        text = format_ssf(inst, note.strip())
    run.lines.append(text.rstrip("\n"))


def _cmd_bench(run: _Run) -> None:
    kind = run.cfg.kind or "random-graph"
    seeds = spawn(run.cfg.seed, len(run.cfg.sizes) * run.cfg.repeat)
    for i, (a, b) in enumerate(run.cfg.sizes):
        for r in range(run.cfg.repeat):
            seq = seeds[i * run.cfg.repeat + r]
            row: dict[str, Any] = {"schema": REPORT_SCHEMA, "command": "bench", "kind": kind, "size": [a, b], "repeat": r}
            if kind == "random-mbp":
                inst = generate(kind, {"nodes": a, "arcs": b, "pairs": max(1, a // 8)}, seq)
                start = time.perf_counter()
                ps = solve_mbp(inst)
                row.update(pairs=len(ps), seconds=round(time.perf_counter() - start, 6))
            else:
                inst = generate("random-graph", {"n": a, "m": b}, seq)
                net = matching_to_network(inst)[0].net
                start = time.perf_counter()
                rep = SOLVERS[run.cfg.algorithm](net)
                row.update(value=rep.value, phases=len(rep.rdists), seconds=round(time.perf_counter() - start, 6))
            run.lines.append(json.dumps(row, sort_keys=True))


COMMANDS: dict[str, Callable[[_Run], None]] = {
    "solve": _cmd_solve,
    "match": _cmd_match,
    "bmatch": _cmd_bmatch,
    "rpath": _cmd_rpath,
    "mbp": _cmd_mbp,
    "decompose": _cmd_decompose,
    "compress": _cmd_compress,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
    "bench": _cmd_bench,
}


def run(cfg: RunConfig) -> int:
    """Execute one command and return its exit code."""
    r = _Run(cfg)
    try:
        COMMANDS[cfg.command](r)
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return r.finish()


# -- argument parsing --------------------------------------------------------------


def _param(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got '{text}'")
    try:
        value: Any = int(raw)
    except ValueError:
        try:
            value = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"value of '{key}' must be a number") from None
    return key, value


def _size(text: str) -> tuple[int, int]:
    a, sep, b = text.partition(":")
    try:
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got '{text}'") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewflow", description="Maximum integer skew-symmetric flows and matchings.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str, inputs: Sequence[tuple[str, str]] = (("instance", "instance file"),), algo: bool = False):
        p = sub.add_parser(name, help=help)
        for i, (meta, text) in enumerate(inputs):
            p.add_argument(meta, nargs="?" if i else None, help=text)
        if algo:
            p.add_argument("--algo", choices=sorted(SOLVERS), default="sbfm", help="flow algorithm (default sbfm)")
        p.add_argument("-o", "--output", help="write results here instead of stdout")
        p.add_argument("--report", help="append a JSON-lines report to this file")
        return p

    p = command("solve", "maximum IS-flow with an odd-barrier certificate", algo=True)
    p.add_argument("--oracle", action="store_true", help="cross-check against exhaustive search when small")
    p = command("match", "maximum matching of an edge instance", algo=True)
    p.add_argument("--compress", action="store_true", help="solve on the star-compressed network")
    p.add_argument("--delta", type=float, default=0.25, help="clique parameter in (0, 1/2)")
    command("bmatch", "maximum bounded matching of an edge instance with bounds", algo=True)
    command("rpath", "regular source-sink path or barrier")
    p = command("mbp", "maximal balanced path-set")
    p.add_argument("--oracle", action="store_true", help="check maximality by exhaustive search when small")
    command("decompose", "split a flow into elementary flows", (("instance", "instance file"), ("flow", "solution file (solve first if omitted)")), algo=True)
    p = command("compress", "symmetric clique compression statistics", (("instance", "edge file"), ("network", "write the compressed ssf network here")))
    p.add_argument("--delta", type=float, default=0.25, help="clique parameter in (0, 1/2)")
    command("verify", "check a flow and its certificate", (("instance", "instance file"), ("solution", "solution file"), ("certificate", "separate certificate file")))
    p = command("gen", "write a random instance", (("kind", "one of " + ", ".join(sorted(KINDS))),))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", type=_param, action="append", default=[], help="generator parameter key=value")
    p = command("bench", "time solvers on generated instances", ())
    p.add_argument("--kind", choices=["random-graph", "random-mbp"], default="random-graph")
    p.add_argument("--size", type=_size, action="append", default=[], help="nodes:edges (or nodes:arcs for random-mbp)")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algo", choices=sorted(SOLVERS), default="sbfm")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    names = ("instance", "flow", "network", "solution", "certificate")
    inputs = [getattr(args, n) for n in names if getattr(args, n, None)]
    cfg = RunConfig(
        command=args.command,
        inputs=inputs,
        algorithm=getattr(args, "algo", "sbfm"),
        seed=getattr(args, "seed", 0),
        output=args.output,
        report=args.report,
        delta=getattr(args, "delta", 0.25),
        compress=getattr(args, "compress", False),
        oracle=getattr(args, "oracle", False),
        params=dict(getattr(args, "param", [])),
        sizes=getattr(args, "size", []) or [(1000, 5000)],
        repeat=getattr(args, "repeat", 1),
    )
    if args.command == "gen":
        cfg.kind, cfg.inputs = args.kind, []
    elif args.command == "bench":
        cfg.kind = args.kind
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
