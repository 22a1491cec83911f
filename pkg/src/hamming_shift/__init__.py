"""Exact and sampled statistics of how adding a fixed alpha moves Hamming weight."""

__version__ = "0.1.0"

from .bitstring import (  # noqa: E402
    BitString,
    BlockDecomposition,
    Modulus,
    ModKind,
    add,
    alpha_from_rational,
    alpha_with_blocks,
    decompose_blocks,
    hamming_weight,
    parse_alpha,
)
from .exact_dp import JointWeightDistribution, ShiftReport, joint_distribution, quadrant_masses, shift_report  # noqa: E402

__all__ = [
    "BitString",
    "BlockDecomposition",
    "JointWeightDistribution",
    "ModKind",
    "Modulus",
    "ShiftReport",
    "add",
    "alpha_from_rational",
    "alpha_with_blocks",
    "decompose_blocks",
    "hamming_weight",
    "joint_distribution",
    "parse_alpha",
    "quadrant_masses",
    "shift_report",
]
