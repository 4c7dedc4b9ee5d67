"""Exact engine for resolving monomial valuations on localized monomial
algebras by local blowups, with replayable traces and independently
verifiable certificates."""

from .blowup import BlowupStep, blowup_along, decompose_to_simple, simple_blowup
from .lattices import LatticeBasis, hnf, snf
from .lifting import (
    LiftRecord,
    lift_from_localization,
    lift_from_residue,
    lift_sequence_from_localization,
    lift_sequence_from_residue,
    parameters_in_p,
)
from .rankone import (
    Budget,
    RankOneOutcome,
    Strategy,
    enforce_divisibility,
    monomialize_targets,
    uniformize_rank_one,
)
from .reduction import (
    BinomialRelation,
    Certificate,
    Trace,
    TraceStep,
    eliminate_excess_generators,
    extract_relations,
    order_unit_values,
    uniformize,
)
from .ringmodel import (
    MonomialExpression,
    PrimeDescriptor,
    RegularityCertificate,
    RingModel,
    center_of,
    dimension,
    is_regular,
    localize_at,
    minimal_generators,
    monomial_member,
    monomial_member_bruteforce,
    residue_ring,
    ring_equal,
)
from .values import MonomialValuation, decompose, evaluate, lex_cmp, project, residual, split_level

__version__ = "0.1.0"
