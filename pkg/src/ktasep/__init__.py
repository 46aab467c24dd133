"""Exact kernels and samplers for discrete TASEP variants.

Four discrete totally asymmetric exclusion processes (geometric/Bernoulli
jumps crossed with pushing/blocking conflict resolution) plus an
inhomogeneous blocking process with position-dependent rates.  Transition
kernels are computed exactly by three independent routes (tableau
generating functions, noncommutative Schur operators, closed-form products
chained by the Markov property) and cross-validated against brute-force
enumeration and Monte Carlo sampling.
"""

from .partitions import Partition, SkewShape
from .exactalg import Frac, LaurentPoly, RationalFn, VarId
from .conventions import IndexConvention, UpdateOrder, PINNED_CONVENTIONS

__all__ = [
    "Partition",
    "SkewShape",
    "Frac",
    "LaurentPoly",
    "RationalFn",
    "VarId",
    "IndexConvention",
    "UpdateOrder",
    "PINNED_CONVENTIONS",
]

__version__ = "0.1.0"
