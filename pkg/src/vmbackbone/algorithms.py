"""The backbone algorithms: enumeration, naive and iterative literal tests,
and the two chunk-betting algorithms, plus rotatable-literal filtering, chunk
size strategies and size-based automatic algorithm selection.

All algorithms require a satisfiable input formula and return the exact
backbone: the set of literals true in every satisfying assignment.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .cnf import CnfFormula, FormulaStats, Lit, LiteralSet
from .solver import SolverSession, new_session


class UnsatisfiableInputError(ValueError):
    """The input formula has no satisfying assignment; its backbone is undefined."""


class BackboneTimeoutError(RuntimeError):
    """Cooperative timeout between solve calls.

    ``partial`` holds the literals confirmed before the deadline; it is not
    authoritative (the remaining candidates were never resolved).
    """

    def __init__(self, partial: LiteralSet, sat_calls: int):
        super().__init__(f"backbone computation timed out after {sat_calls} solver calls")
        self.partial = partial
        self.sat_calls = sat_calls


class Algorithm(Enum):
    ENUMERATION = "enum"
    NAIVE = "naive"
    ITERATIVE = "iter"
    ALL_IN = "all-in"
    ALL_OUT = "all-out"


@dataclass(frozen=True)
class FixedChunk:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("fixed chunk size must be >= 1")

    def spec(self) -> str:
        return f"fixed:{self.k}"


@dataclass(frozen=True)
class AdaptiveGeometricChunk:
    """Chunk size starts at 1, multiplies by ``factor`` on a winning bet and
    resets to 1 on a losing bet."""

    factor: int = 10

    def __post_init__(self):
        if self.factor < 2:
            raise ValueError("adaptive growth factor must be >= 2")

    def spec(self) -> str:
        return f"adaptive:{self.factor}"


@dataclass(frozen=True)
class WholeFormulaChunk:
    """A single chunk covering all remaining candidates on every bet."""

    def spec(self) -> str:
        return "whole"


ChunkStrategy = Union[FixedChunk, AdaptiveGeometricChunk, WholeFormulaChunk]


def parse_chunk(spec: str) -> ChunkStrategy:
    """Parse a chunk strategy spec: ``fixed:K``, ``adaptive:K`` or ``whole``."""
    if spec == "whole":
        return WholeFormulaChunk()
    kind, sep, value = spec.partition(":")
    if not sep or not value.isdigit():
        raise ValueError(f"bad chunk spec {spec!r} (expected fixed:K, adaptive:K or whole)")
    if kind == "fixed":
        return FixedChunk(int(value))
    if kind == "adaptive":
        return AdaptiveGeometricChunk(int(value))
    raise ValueError(f"bad chunk spec {spec!r} (expected fixed:K, adaptive:K or whole)")


@dataclass
class ChunkState:
    """Mutable chunk-size state for one backbone computation."""

    current_k: int = 1
    last_outcome: str | None = None  # "win" | "lose" | None


def next_chunk_size(strategy: ChunkStrategy, state: ChunkState, outcome: str,
                    remaining: int | None = None) -> int:
    """Chunk size for the next bet, given the outcome of the last one.

    Fixed: always k. Adaptive geometric: multiply by the factor on "win",
    reset to 1 on "lose". Whole formula: the remaining candidate count
    (``remaining`` is required).
    """
    if outcome not in ("win", "lose"):
        raise ValueError(f"outcome must be 'win' or 'lose', not {outcome!r}")
    if isinstance(strategy, FixedChunk):
        return strategy.k
    if isinstance(strategy, AdaptiveGeometricChunk):
        return state.current_k * strategy.factor if outcome == "win" else 1
    if isinstance(strategy, WholeFormulaChunk):
        if remaining is None:
            raise ValueError("whole-formula chunking needs the remaining candidate count")
        return max(1, remaining)
    raise TypeError(f"unknown chunk strategy {strategy!r}")


@dataclass(frozen=True)
class AlgorithmConfig:
    """One point of the experiment's configuration axis."""

    algorithm: Algorithm
    chunk: ChunkStrategy = AdaptiveGeometricChunk(10)
    uc_injection: bool = False
    rotatable_filter: bool = False

    def config_id(self) -> str:
        parts = [self.algorithm.value]
        if self.algorithm in (Algorithm.ALL_IN, Algorithm.ALL_OUT):
            parts.append(self.chunk.spec())
        if self.uc_injection:
            parts.append("uc")
        if self.rotatable_filter:
            parts.append("rot")
        return "+".join(parts)


@dataclass(frozen=True)
class BackboneReport:
    backbone: LiteralSet
    sat_calls: int
    wall_time: float
    algorithm_config: AlgorithmConfig


def rotatable_literals(formula: CnfFormula, model: LiteralSet) -> LiteralSet:
    """Literals of a model that can be flipped individually while the rest of
    the model keeps satisfying the formula; such literals are never backbone.

    One pass over the clauses: a model literal is *unit* if it is the only
    model literal satisfying some clause. Model literals that are unit in
    neither polarity are rotatable. Raises ValueError when the model is not a
    total satisfying assignment.
    """
    if len(model) != formula.num_vars:
        raise ValueError("model is not total over the formula's variables")
    units: set[Lit] = set()
    for clause in formula.clauses:
        hit = 0
        last = 0
        for lit in clause:
            if lit in model:
                hit += 1
                if hit > 1:
                    break
                last = lit
        if hit == 0:
            raise ValueError(f"model does not satisfy clause {clause}")
        if hit == 1:
            units.add(last)
    return LiteralSet(lit for lit in model if lit not in units and -lit not in units)


def auto_config(stats: FormulaStats) -> AlgorithmConfig:
    """Size-based algorithm selection: the iterative algorithm up to 1,000
    variables, chunked core-based betting with adaptive chunk growth above."""
    if stats.num_vars <= 1000:
        return AlgorithmConfig(algorithm=Algorithm.ITERATIVE)
    return AlgorithmConfig(algorithm=Algorithm.ALL_OUT, chunk=AdaptiveGeometricChunk(10))


@dataclass
class _Run:
    """Shared bookkeeping for one backbone computation."""

    session: SolverSession
    config: AlgorithmConfig
    formula: CnfFormula
    deadline: float | None = None
    confirmed: set[Lit] = field(default_factory=set)
    trace: list[frozenset[Lit]] | None = None
    started: float = field(default_factory=time.perf_counter)

    def check_deadline(self):
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise BackboneTimeoutError(LiteralSet(self.confirmed), self.session.num_solve_calls)

    def solve(self, assumptions=(), constrained: frozenset[Lit] | None = None):
        self.check_deadline()
        if self.trace is not None:
            self.trace.append(constrained if constrained is not None else frozenset(assumptions))
        return self.session.solve(assumptions)

    def first_model(self) -> LiteralSet:
        outcome = self.solve()
        if not outcome.sat:
            raise UnsatisfiableInputError("input formula is unsatisfiable")
        assert outcome.model is not None
        return outcome.model

    def filtered(self, model: LiteralSet) -> LiteralSet:
        if self.config.rotatable_filter:
            return model - rotatable_literals(self.formula, model)
        return model

    def confirm(self, lit: Lit):
        self.confirmed.add(lit)
        if self.config.uc_injection:
            self.session.add_clause([lit])

    def report(self) -> BackboneReport:
        return BackboneReport(
            backbone=LiteralSet(self.confirmed),
            sat_calls=self.session.num_solve_calls,
            wall_time=time.perf_counter() - self.started,
            algorithm_config=self.config,
        )


def _run_enumeration(run: _Run) -> None:
    # Intersect all models, enumerated with blocking clauses.
    backbone: frozenset[Lit] | None = None
    solutions = run.session.iter_solutions()
    while True:
        run.check_deadline()
        if run.trace is not None:
            run.trace.append(frozenset())
        model = next(solutions, None)  # one solve call, incl. the final UNSAT
        if model is None:
            break
        lits = frozenset(model)
        backbone = lits if backbone is None else backbone & lits
    if backbone is None:
        raise UnsatisfiableInputError("input formula is unsatisfiable")
    run.confirmed.update(backbone)


def _run_naive(run: _Run) -> None:
    # Test every one of the 2n literals: l is backbone iff the formula plus
    # the negation of l is unsatisfiable. Exactly 2n solver calls.
    for v in range(1, run.formula.num_vars + 1):
        for lit in (v, -v):
            outcome = run.solve([-lit])
            if not outcome.sat:
                run.confirm(lit)
        if v in run.confirmed and -v in run.confirmed:
            # Both polarities forced: only an unsatisfiable formula does that.
            raise UnsatisfiableInputError("input formula is unsatisfiable")


def _run_iterative(run: _Run) -> None:
    # Candidates start as the first model (half of all literals); every UNSAT
    # answer confirms one backbone literal, every SAT answer intersects the
    # candidates with the new model.
    candidates = run.filtered(run.first_model())
    while candidates:
        lit = next(iter(candidates))
        outcome = run.solve([-lit])
        if not outcome.sat:
            run.confirm(lit)
            candidates = candidates.discard(lit)
        else:
            candidates = candidates & run.filtered(outcome.model)


def _pick_chunk(candidates: LiteralSet, k: int) -> list[Lit]:
    chunk = []
    for lit in candidates:
        if len(chunk) >= k:
            break
        chunk.append(lit)
    return chunk


def _chunk_k(run: _Run, state: ChunkState, remaining: int) -> int:
    if isinstance(run.config.chunk, FixedChunk):
        return min(run.config.chunk.k, remaining)
    if isinstance(run.config.chunk, WholeFormulaChunk):
        return remaining
    return min(state.current_k, remaining)


def _settle_bet(run: _Run, state: ChunkState, outcome: str, remaining: int) -> None:
    state.current_k = next_chunk_size(run.config.chunk, state, outcome, remaining=remaining)
    state.last_outcome = outcome


def _run_all_in(run: _Run) -> None:
    # Bet that a whole chunk is in the backbone: enforce the disjunction of
    # the chunk's negations through a switchable clause. UNSAT proves every
    # chunk literal backbone at once; SAT refutes at least one and the model
    # shrinks the candidate set.
    candidates = run.filtered(run.first_model())
    state = ChunkState()
    while candidates:
        k = _chunk_k(run, state, len(candidates))
        chunk = _pick_chunk(candidates, k)
        negations = [-lit for lit in chunk]
        handle = run.session.add_switchable_clause(negations)
        outcome = run.solve([handle.enable], constrained=frozenset(negations))
        if not outcome.sat:
            for lit in chunk:
                run.confirm(lit)
            candidates = candidates - LiteralSet(chunk)
            _settle_bet(run, state, "win", len(candidates))
        else:
            candidates = candidates & run.filtered(outcome.model)
            _settle_bet(run, state, "lose", len(candidates))


def _run_all_out(run: _Run) -> None:
    # Bet that no chunk literal is in the backbone: assume all their
    # negations. SAT wins the bet and prunes the whole chunk. On UNSAT the
    # core drives recovery: a single implicated assumption pins one backbone
    # literal; a core covering the whole chunk forces per-literal tests;
    # otherwise the chunk shrinks to the literals implicated by the core.
    candidates = run.filtered(run.first_model())
    state = ChunkState()
    while candidates:
        k = _chunk_k(run, state, len(candidates))
        chunk = LiteralSet(_pick_chunk(candidates, k))
        first_bet = True
        while chunk:
            outcome = run.solve([-lit for lit in chunk])
            if outcome.sat:
                candidates = candidates & run.filtered(outcome.model)
                if first_bet:
                    _settle_bet(run, state, "win", len(candidates))
                break
            if first_bet:
                _settle_bet(run, state, "lose", len(candidates))
            first_bet = False
            core = outcome.core
            assert core is not None
            core_hits = [lit for lit in chunk if -lit in core]
            if len(core_hits) == 1:
                lit = core_hits[0]
                run.confirm(lit)
                chunk = chunk.discard(lit)
                candidates = candidates.discard(lit)
            elif all(-lit in core for lit in chunk):
                # The core covers the whole chunk and cannot help advance:
                # test the remaining chunk literals one at a time.
                while chunk:
                    lit = next(iter(chunk))
                    single = run.solve([-lit])
                    if not single.sat:
                        run.confirm(lit)
                        chunk = chunk.discard(lit)
                        candidates = candidates.discard(lit)
                    else:
                        model = run.filtered(single.model)
                        chunk = chunk & model
                        candidates = candidates & model
                break
            else:
                # Strictly shrink the chunk to the literals the core
                # implicates before betting again, so the loop terminates.
                chunk = LiteralSet(core_hits)


_RUNNERS = {
    Algorithm.ENUMERATION: _run_enumeration,
    Algorithm.NAIVE: _run_naive,
    Algorithm.ITERATIVE: _run_iterative,
    Algorithm.ALL_IN: _run_all_in,
    Algorithm.ALL_OUT: _run_all_out,
}


def compute_backbone(formula: CnfFormula, config: AlgorithmConfig,
                     backend: str | None = None, timeout: float | None = None,
                     trace: list[frozenset[Lit]] | None = None) -> BackboneReport:
    """Compute the exact backbone of a satisfiable formula.

    ``timeout`` is a cooperative budget in seconds, checked between solver
    calls; on expiry :class:`BackboneTimeoutError` carries the partial result.
    ``trace``, when given, collects one frozenset per solver call holding the
    constrained original-variable literals of that query (activation literals
    excluded), which makes query sequences comparable across algorithms.
    """
    session = new_session(formula, backend=backend)
    run = _Run(
        session=session,
        config=config,
        formula=formula,
        deadline=(time.perf_counter() + timeout) if timeout is not None else None,
        trace=trace,
    )
    _RUNNERS[config.algorithm](run)
    return run.report()


def backbone_enumeration(formula: CnfFormula, backend: str | None = None,
                         timeout: float | None = None) -> BackboneReport:
    return compute_backbone(formula, AlgorithmConfig(Algorithm.ENUMERATION),
                            backend=backend, timeout=timeout)


def backbone_naive(formula: CnfFormula, backend: str | None = None,
                   timeout: float | None = None) -> BackboneReport:
    return compute_backbone(formula, AlgorithmConfig(Algorithm.NAIVE),
                            backend=backend, timeout=timeout)


def backbone_iterative(formula: CnfFormula, uc_injection: bool = False,
                       rotatable_filter: bool = False, backend: str | None = None,
                       timeout: float | None = None,
                       trace: list[frozenset[Lit]] | None = None) -> BackboneReport:
    config = AlgorithmConfig(Algorithm.ITERATIVE, uc_injection=uc_injection,
                             rotatable_filter=rotatable_filter)
    return compute_backbone(formula, config, backend=backend, timeout=timeout, trace=trace)


def backbone_all_in(formula: CnfFormula, chunk: ChunkStrategy, uc_injection: bool = False,
                    rotatable_filter: bool = False, backend: str | None = None,
                    timeout: float | None = None,
                    trace: list[frozenset[Lit]] | None = None) -> BackboneReport:
    config = AlgorithmConfig(Algorithm.ALL_IN, chunk=chunk, uc_injection=uc_injection,
                             rotatable_filter=rotatable_filter)
    return compute_backbone(formula, config, backend=backend, timeout=timeout, trace=trace)


def backbone_all_out(formula: CnfFormula, chunk: ChunkStrategy, uc_injection: bool = False,
                     rotatable_filter: bool = False, backend: str | None = None,
                     timeout: float | None = None,
                     trace: list[frozenset[Lit]] | None = None) -> BackboneReport:
    config = AlgorithmConfig(Algorithm.ALL_OUT, chunk=chunk, uc_injection=uc_injection,
                             rotatable_filter=rotatable_filter)
    return compute_backbone(formula, config, backend=backend, timeout=timeout, trace=trace)
