"""Maximum integer skew-symmetric flows, matchings and their certificates."""

from __future__ import annotations

from .blockphase import BalancedPathSet, GoodPair, MBPInstance, solve_bbf, solve_mbp, totally_blocking_isflow
from .certify import OracleBudget, verify_isflow, verify_odd_barrier
from .compress import compress_matching, decompress_flow, symmetric_clique_partition
from .decompose import symmetric_decomposition
from .formats import parse_instance
from .generators import generate
from .reductions import MatchingInstance, matching_to_network, solve_matching
from .regpath import find_regular_path, shortest_unit_sra
from .solvers import (
    SOLVERS,
    SolveReport,
    max_isflow_anstee,
    max_isflow_augmenting,
    max_isflow_sapm,
    max_isflow_sbfm,
)
from .ssgraph import ISFlow, OddBarrier, SBarrier, SkewSymmetricNetwork, validate_network

__all__ = [
    "BalancedPathSet",
    "GoodPair",
    "ISFlow",
    "MBPInstance",
    "MatchingInstance",
    "OddBarrier",
    "OracleBudget",
    "SBarrier",
    "SOLVERS",
    "SkewSymmetricNetwork",
    "SolveReport",
    "compress_matching",
    "decompress_flow",
    "find_regular_path",
    "generate",
    "matching_to_network",
    "max_isflow_anstee",
    "max_isflow_augmenting",
    "max_isflow_sapm",
    "max_isflow_sbfm",
    "parse_instance",
    "shortest_unit_sra",
    "solve_bbf",
    "solve_matching",
    "solve_mbp",
    "symmetric_clique_partition",
    "symmetric_decomposition",
    "totally_blocking_isflow",
    "validate_network",
    "verify_isflow",
    "verify_odd_barrier",
]
