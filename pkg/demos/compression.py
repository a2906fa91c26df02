"""Compress a dense graph into stars and check the matching is unchanged."""

from __future__ import annotations

import sys

from skewflow.compress import compress_matching, decompress_flow, measured_ratio
from skewflow.generators import generate
from skewflow.solvers import max_isflow_sbfm


def main(n: int = 128) -> None:
    inst = generate("dense", {"n": n}, seed=0)
    st = compress_matching(inst)
    big = sum(1 for c in st.partition.cliques if c.arc_count > 1) // 2
    print(f"n={n}, edges {len(inst.edges)}")
    print(f"arcs {st.original.arc_count} -> {st.net.arc_count} using {big} star pairs")
    print(f"partition size / (m * beta) = {measured_ratio(st):.2f}")
    direct = max_isflow_sbfm(st.original).value
    packed = decompress_flow(max_isflow_sbfm(st.net).flow, st).value
    print(f"matching size direct {direct // 2}, through stars {packed // 2}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 128)
