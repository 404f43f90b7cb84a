"""Backbone extraction, preprocessing and decision propagation for CNF
formulas derived from configurable-system variability models."""

from .algorithms import (
    AdaptiveGeometricChunk,
    Algorithm,
    AlgorithmConfig,
    BackboneReport,
    BackboneTimeoutError,
    ChunkState,
    FixedChunk,
    UnsatisfiableInputError,
    WholeFormulaChunk,
    auto_config,
    backbone_all_in,
    backbone_all_out,
    backbone_enumeration,
    backbone_iterative,
    backbone_naive,
    compute_backbone,
    next_chunk_size,
    parse_chunk,
    rotatable_literals,
)
from .cnf import (
    CnfFormula,
    DimacsParseError,
    EmptyClauseError,
    FormulaStats,
    LiteralSet,
    formula_stats,
    parse_dimacs,
    write_dimacs,
)
from .preprocess import SimplificationResult, simplify_with_backbone
from .propagation import (
    AlreadyDecidedError,
    Classification,
    ConfigSession,
    ConflictingDecisionsError,
    NotADecisionError,
    PropagationResult,
    classify_variables,
    propagate,
)
from .solver import (
    ActivationHandle,
    SolveOutcome,
    SolverSession,
    UnknownBackendError,
    available_backends,
    new_session,
    register_backend,
)

__all__ = [
    "AdaptiveGeometricChunk",
    "ActivationHandle",
    "Algorithm",
    "AlgorithmConfig",
    "AlreadyDecidedError",
    "BackboneReport",
    "BackboneTimeoutError",
    "ChunkState",
    "Classification",
    "CnfFormula",
    "ConfigSession",
    "ConflictingDecisionsError",
    "DimacsParseError",
    "EmptyClauseError",
    "FixedChunk",
    "FormulaStats",
    "LiteralSet",
    "NotADecisionError",
    "PropagationResult",
    "SimplificationResult",
    "SolveOutcome",
    "SolverSession",
    "UnknownBackendError",
    "UnsatisfiableInputError",
    "WholeFormulaChunk",
    "auto_config",
    "available_backends",
    "backbone_all_in",
    "backbone_all_out",
    "backbone_enumeration",
    "backbone_iterative",
    "backbone_naive",
    "classify_variables",
    "compute_backbone",
    "formula_stats",
    "new_session",
    "next_chunk_size",
    "parse_chunk",
    "parse_dimacs",
    "propagate",
    "register_backend",
    "rotatable_literals",
    "simplify_with_backbone",
    "write_dimacs",
]
