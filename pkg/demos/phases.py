"""Watch shortest blocking phases on a random matching network."""

from __future__ import annotations

import math
import sys

from skewflow.generators import generate
from skewflow.reductions import matching_to_network
from skewflow.solvers import max_isflow_sapm, max_isflow_sbfm, transit_capacity


def main(n: int = 2000) -> None:
    inst = generate("random-graph", {"n": n, "m": 5 * n}, seed=3)
    net = matching_to_network(inst)[0].net
    rep = max_isflow_sbfm(net)
    bound = min(net.node_count - 1, 2 * math.sqrt(transit_capacity(net)))
    print(f"n={n}: matching size {rep.value // 2}")
    print(f"phase r-distances {rep.rdists} (bound {bound:.0f})")
    aug = max_isflow_sapm(net)
    print(f"shortest augmenting paths needed {aug.iterations} augmentations for the same value {aug.value}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 2000)
