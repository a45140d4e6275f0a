"""Finite-groupoid semantics workbench.

A library and CLI for computing with finite groupoids: the comma-based
factorisation system on groupoids with its lifting structures, the induced
comprehension category with Σ/Π/Id type formers, a strictly split version of
it, a small dependent type checker interpreted in that split structure, and a
finite cubical-set laboratory for uniform and normal-uniform lifting
structures.
"""

from .core import (
    FinGroupoid,
    GFunctor,
    GNatIso,
    GroupoidError,
    SliceMap,
    canonical_pullback,
    comma_groupoid,
    enumerate_functors,
    groupoid_diagnostics,
    identity_functor,
    compose_functors,
    is_cartesian_square,
    slice_hom_enumerate,
    strict_fiber,
    validate_functor,
    validate_groupoid,
)
from .pushforward import Pushforward, pushforward

__all__ = [
    "FinGroupoid", "GFunctor", "GNatIso", "GroupoidError", "SliceMap",
    "canonical_pullback", "comma_groupoid", "enumerate_functors",
    "groupoid_diagnostics", "identity_functor", "compose_functors",
    "is_cartesian_square", "slice_hom_enumerate", "strict_fiber",
    "validate_functor", "validate_groupoid", "Pushforward", "pushforward",
]
