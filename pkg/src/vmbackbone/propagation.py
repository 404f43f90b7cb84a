"""Decision propagation and variable classification for configurable systems.

Propagating user decisions means computing the backbone of the formula
conjoined with the decisions as unit clauses: positive backbone literals are
implied selections, negative ones implied exclusions. A ConfigSession keeps
an ordered decision log for the interactive configurator and recomputes the
propagation from scratch on every change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .algorithms import UnsatisfiableInputError, auto_config, compute_backbone
from .cnf import CnfFormula, Lit, LiteralSet, formula_stats


class ConflictingDecisionsError(ValueError):
    """The formula conjoined with the decisions is unsatisfiable."""

    def __init__(self, decisions: LiteralSet):
        super().__init__(f"decisions {sorted(decisions, key=abs)} conflict with the model")
        self.decisions = decisions


class AlreadyDecidedError(ValueError):
    pass


class NotADecisionError(ValueError):
    pass


@dataclass(frozen=True)
class PropagationResult:
    """Partition of the variables after propagating user decisions."""

    decided: LiteralSet
    implied_true: frozenset[int]
    implied_false: frozenset[int]
    free: frozenset[int]


@dataclass(frozen=True)
class Classification:
    """Core (always selected), dead (never selectable) and free variables."""

    core: frozenset[int]
    dead: frozenset[int]
    free: frozenset[int]


def propagate(formula: CnfFormula, decisions: Iterable[Lit] | LiteralSet,
              backend: str | None = None) -> PropagationResult:
    """Backbone of formula-plus-decisions, split into the decision partition.

    Decisions are reported separately from their implications; the algorithm
    is chosen by size-based auto selection. Raises ConflictingDecisionsError
    when the decisions are jointly incompatible with the formula.
    """
    decided = decisions if isinstance(decisions, LiteralSet) else LiteralSet(decisions)
    for lit in decided:
        if abs(lit) > formula.num_vars:
            raise ValueError(f"decision {lit} outside the formula's variables")

    augmented = CnfFormula(
        num_vars=formula.num_vars,
        clauses=formula.clauses + tuple((lit,) for lit in decided),
    )
    config = auto_config(formula_stats(formula))
    try:
        report = compute_backbone(augmented, config, backend=backend)
    except UnsatisfiableInputError:
        if not decided:
            raise  # the formula itself is unsatisfiable, not the decisions
        raise ConflictingDecisionsError(decided) from None

    decided_vars = decided.variables()
    implied_true = frozenset(
        lit for lit in report.backbone if lit > 0 and lit not in decided_vars
    )
    implied_false = frozenset(
        -lit for lit in report.backbone if lit < 0 and -lit not in decided_vars
    )
    free = frozenset(
        v for v in range(1, formula.num_vars + 1)
        if v not in decided_vars and v not in implied_true and v not in implied_false
    )
    return PropagationResult(
        decided=decided,
        implied_true=implied_true,
        implied_false=implied_false,
        free=free,
    )


def classify_variables(formula: CnfFormula, backend: str | None = None) -> Classification:
    """Core/dead/free partition from the backbone of the formula alone."""
    result = propagate(formula, (), backend=backend)
    return Classification(
        core=result.implied_true,
        dead=result.implied_false,
        free=result.free,
    )


class ConfigSession:
    """Stateful propagation over an ordered decision log.

    Mutations recompute the propagation from scratch on a throwaway solver
    session; a conflicting decision leaves the session unchanged. The cached
    result always equals recomputation from the log.
    """

    def __init__(self, formula: CnfFormula, backend: str | None = None):
        self.formula = formula
        self._backend = backend
        self._log: list[Lit] = []
        self._cached = propagate(formula, (), backend=backend)

    @property
    def decisions(self) -> tuple[Lit, ...]:
        return tuple(self._log)

    @property
    def result(self) -> PropagationResult:
        return self._cached

    def assert_decision(self, lit: Lit) -> PropagationResult:
        if any(abs(lit) == abs(d) for d in self._log):
            raise AlreadyDecidedError(f"variable {abs(lit)} is already decided")
        attempt = self._log + [lit]
        self._cached = propagate(self.formula, attempt, backend=self._backend)
        self._log = attempt
        return self._cached

    def retract_decision(self, var: int) -> PropagationResult:
        remaining = [d for d in self._log if abs(d) != var]
        if len(remaining) == len(self._log):
            raise NotADecisionError(f"variable {var} is not a user decision")
        self._cached = propagate(self.formula, remaining, backend=self._backend)
        self._log = remaining
        return self._cached
