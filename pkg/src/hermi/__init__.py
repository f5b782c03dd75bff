"""Exact and certified computations for Hermitian modular groups of degree two.

Modules: ``iquad`` (imaginary quadratic integers), ``groups`` (U(n,n) over the
order), ``cocycle`` (the automorphy-factor cocycle), ``symbols`` (Kronecker,
theta and Mennicke symbols) and ``experiments`` (reproduction suites).
"""

from .errors import HermiError, PrecisionExhausted, PreconditionError, SearchExhausted
from .iquad import QuadInt, QuadRat, make_order
from .groups import GroupMatrix, LevelIdeal, MennickePair, complete_pair
from .cocycle import CocycleValue, w
from .symbols import kronecker

__version__ = "0.1.0"

__all__ = [
    "HermiError", "PrecisionExhausted", "PreconditionError", "SearchExhausted",
    "QuadInt", "QuadRat", "make_order", "GroupMatrix", "LevelIdeal", "MennickePair",
    "complete_pair", "CocycleValue", "w", "kronecker",
]
