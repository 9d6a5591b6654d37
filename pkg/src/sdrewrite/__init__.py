"""Convex double-pushout rewriting of string diagrams as interfaced hypergraphs."""
from .cospan import (
    Cospan,
    InterfaceError,
    MonogamyReport,
    compose,
    cospan_isomorphism,
    cospans_isomorphic,
    frobenius_generator,
    generator_cospan,
    identity,
    is_ma,
    is_monogamous,
    rewire,
    symmetry,
    tensor,
)
from .dpo import (
    Complement,
    Match,
    RewriteError,
    RewriteRule,
    RewriteStep,
    Trace,
    admissible_steps,
    apply_step,
    boundary_complement,
    enumerate_pushout_complements,
    find_matches,
    is_left_connected,
    normalize,
)
from .hypergraph import (
    Edge,
    GraphError,
    Homomorphism,
    Hypergraph,
    Selection,
    Signature,
    has_path,
    in_degree,
    is_acyclic,
    is_convex,
    isomorphic,
    out_degree,
    predecessors,
    successors,
    validate,
)
from .terms import (
    NotMonogamousAcyclic,
    TermError,
    decompose,
    extract_term,
    interpret,
    parse,
)

__version__ = "0.1.0"

__all__ = [
    "Cospan",
    "InterfaceError",
    "MonogamyReport",
    "compose",
    "cospan_isomorphism",
    "cospans_isomorphic",
    "frobenius_generator",
    "generator_cospan",
    "identity",
    "is_ma",
    "is_monogamous",
    "rewire",
    "symmetry",
    "tensor",
    "Complement",
    "Match",
    "RewriteError",
    "RewriteRule",
    "RewriteStep",
    "Trace",
    "admissible_steps",
    "apply_step",
    "boundary_complement",
    "enumerate_pushout_complements",
    "find_matches",
    "is_left_connected",
    "normalize",
    "Edge",
    "GraphError",
    "Homomorphism",
    "Hypergraph",
    "Selection",
    "Signature",
    "has_path",
    "in_degree",
    "is_acyclic",
    "is_convex",
    "isomorphic",
    "out_degree",
    "predecessors",
    "successors",
    "validate",
    "NotMonogamousAcyclic",
    "TermError",
    "decompose",
    "extract_term",
    "interpret",
    "parse",
]
