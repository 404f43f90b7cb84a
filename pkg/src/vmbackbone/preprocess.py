"""Backbone-based CNF simplification for knowledge-compilation pipelines.

Given a formula and its backbone, the simplified formula (i) contains every
backbone literal as a unit clause, (ii) drops every original clause that
contains a backbone literal, and (iii) deletes opposite-polarity backbone
occurrences from the remaining clauses. The result has exactly the same model
set over the original variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cnf import Clause, CnfFormula, Lit, LiteralSet


@dataclass(frozen=True)
class SimplificationResult:
    simplified: CnfFormula
    units_added: int
    clauses_removed: int
    clauses_shortened: int


def simplify_with_backbone(formula: CnfFormula, backbone: Iterable[Lit] | LiteralSet) -> SimplificationResult:
    """Apply the three backbone simplification rules.

    ``backbone`` must be exactly the backbone of ``formula`` (the caller's
    obligation); passing both polarities of a variable raises ValueError.
    Output clause order is deterministic: unit clauses in ascending variable
    order first, then the surviving clauses in their original order.
    """
    bset = backbone if isinstance(backbone, LiteralSet) else LiteralSet(backbone)

    removed = 0
    shortened = 0
    survivors: list[Clause] = []
    for clause in formula.clauses:
        if any(lit in bset for lit in clause):
            removed += 1
            continue
        kept = tuple(lit for lit in clause if -lit not in bset)
        if not kept:
            # Impossible when bset is the true backbone of a satisfiable
            # formula: an emptied clause would contradict every model.
            raise ValueError(f"backbone contradicts clause {clause}")
        if len(kept) < len(clause):
            shortened += 1
        survivors.append(kept)

    units: list[Clause] = [(lit,) for lit in bset]
    simplified = CnfFormula(num_vars=formula.num_vars, clauses=tuple(units) + tuple(survivors))
    return SimplificationResult(
        simplified=simplified,
        units_added=len(units),
        clauses_removed=removed,
        clauses_shortened=shortened,
    )
