"""Solve the five-node matching example and print the certificate."""

from __future__ import annotations

from skewflow.certify import verify_odd_barrier
from skewflow.decompose import symmetric_decomposition
from skewflow.reductions import MatchingInstance, flow_to_matching, matching_to_network
from skewflow.solvers import SOLVERS

NAMES = "abcde"


def main() -> None:
    inst = MatchingInstance.simple(5, [(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])
    bounded, bm = matching_to_network(inst)
    net = bounded.net
    print(f"network: {net.node_count} nodes, {net.arc_count} arcs")
    for name, solve in sorted(SOLVERS.items()):
        rep = solve(net)
        print(f"{name:7s} value {rep.value}  certificate capacity {rep.certificate.capacity}")
    rep = SOLVERS["sbfm"](net)
    chosen = [inst.edges[i] for i, h in enumerate(flow_to_matching(rep.flow, bm)) if h]
    print("matching:", ", ".join(NAMES[v] + NAMES[w] for v, w in chosen))
    print("barrier A:", sorted(rep.certificate.A), "odd parts:", [sorted(x) for x in rep.certificate.X])
    print("barrier valid:", bool(verify_odd_barrier(net, rep.certificate)))
    for mem in symmetric_decomposition(net, rep.flow).members:
        kind = "cycle" if mem.closed else "path"
        print(f"  {kind} x{mem.delta}: {' -> '.join(map(str, mem.nodes(net)))}")


if __name__ == "__main__":
    main()
