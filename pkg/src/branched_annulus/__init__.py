"""Branched annuli of complex polynomials.

Numerical pipeline from a polynomial with distinct roots to its
combinatorial invariants: partition chain, cyclic root orders, sector
permutations, real noncrossing partition, cacti, banyans and monodromy.
"""
from .annulus import AnnulusComplex, build_cell_structure, to_annulus
from .combinatorics import CyclicOrder, Factorization, Partition, PartitionChain, RealNoncrossingPartition
from .errors import BranchedAnnulusError, InputError, NumericalError, RepeatedRootsError
from .estimator import BranchedAnnulus
from .lifting import StepPolicy, lift_path, lift_paths, trace_direction_set, trace_level_set
from .monodromy import MonodromyRep, monodromy_representation
from .poly import Polynomial, critical_data, find_roots, polynomial_from_coefficients, polynomial_from_roots

__all__ = [
    "AnnulusComplex",
    "BranchedAnnulus",
    "BranchedAnnulusError",
    "CyclicOrder",
    "Factorization",
    "InputError",
    "MonodromyRep",
    "NumericalError",
    "Partition",
    "PartitionChain",
    "Polynomial",
    "RealNoncrossingPartition",
    "RepeatedRootsError",
    "StepPolicy",
    "build_cell_structure",
    "critical_data",
    "find_roots",
    "lift_path",
    "lift_paths",
    "monodromy_representation",
    "polynomial_from_coefficients",
    "polynomial_from_roots",
    "to_annulus",
    "trace_direction_set",
    "trace_level_set",
]
