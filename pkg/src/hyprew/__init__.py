"""Traced hypergraph rewriting toolkit."""

from .hypergraph import (
    Edge,
    Homomorphism,
    Hypergraph,
    HypergraphError,
    Signature,
    coproduct,
    find_homomorphisms,
    isomorphic,
    pushout,
)
from .cospan import (
    InterfacedCospan,
    ValidityClass,
    compose,
    identity,
    is_partial_left_monogamous,
    is_partial_monogamous,
    isomorphic_cospans,
    symmetry,
    tensor,
    trace,
    validity_class,
)
from .term import (
    Compose,
    Copy,
    Discard,
    Generator,
    Identity,
    Symmetry,
    Tensor,
    Term,
    Trace,
    TypedTerm,
    fold,
    interpret,
    typecheck,
    unfold,
)
from .parser import ParseError, parse_signature, parse_term
from .extraction import equal_modulo_axioms, extract
from .dpo import (
    Complement,
    Matching,
    RewriteRule,
    find_matchings,
    is_traced_boundary,
    is_traced_left_boundary,
    normalize,
    pushout_complements,
    rewrite_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
