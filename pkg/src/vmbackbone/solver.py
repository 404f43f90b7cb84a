"""Incremental SAT session: assumptions, total models, assumption cores,
switchable clauses via activation literals, and blocking-clause enumeration.

The built-in backend is a deterministic complete search: unit propagation over
two-watched-literal clause indexing, assumptions enqueued as the first
decisions, branching on the lowest unassigned variable with positive polarity
first, and chronological backtracking. When solving under assumptions, every
conflict is traced through the implication graph to the decisions it depends
on; that dependency set both skips useless polarity flips and yields the
assumption core (a subset of the assumptions) when the search fails.

No clause learning is performed. That keeps the found model a pure function
of the clause database and the branching order, so two encodings of the same
query (an assumed literal vs. an activated unit clause) return the same model.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .cnf import CnfFormula, Lit, LiteralSet

ENV_BACKEND = "VMBACKBONE_SOLVER"


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one incremental query.

    ``model`` is present iff SAT and is total over the session's original
    variables. ``core`` is present iff UNSAT and is a subset of the
    assumptions whose conjunction with the formula is unsatisfiable; it is
    not guaranteed minimal.
    """

    sat: bool
    model: LiteralSet | None = None
    core: LiteralSet | None = None


@dataclass(frozen=True)
class ActivationHandle:
    """Handle for a switchable clause (c | a) with fresh activation variable a.

    Assume ``enable`` to enforce the clause; leave it unassumed (or assume
    ``disable``) to switch the clause off.
    """

    var: int

    @property
    def enable(self) -> Lit:
        return -self.var

    @property
    def disable(self) -> Lit:
        return self.var


class _WatchedLiteralSolver:
    """Deterministic DPLL over a growable clause database.

    ``vals`` maps each signed literal to its truth value (1 true, -1 false,
    0 unassigned); watch lists are keyed by signed literal as well, holding
    clauses (lists) whose first two positions are the watched literals.
    """

    def __init__(self):
        self.num_vars = 0
        self.vals: dict[int, int] = {}
        self.watches: dict[int, list[list[int]]] = {}
        self.reason: list[list[int] | None] = [None]
        self.level: list[int] = [0]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        # Per decision level: literal, flipped flag, dependency levels saved
        # from the failed first branch (assumption solves only).
        self.dec_lit: list[int] = []
        self.dec_flipped: list[bool] = []
        self.dec_saved: list[set[int] | None] = []
        self.qhead = 0
        self.root_conflict = False
        self._suspended = False

    def ensure_vars(self, n: int) -> None:
        while self.num_vars < n:
            self.num_vars += 1
            v = self.num_vars
            self.vals[v] = 0
            self.vals[-v] = 0
            self.watches[v] = []
            self.watches[-v] = []
            self.reason.append(None)
            self.level.append(0)

    def add_clause(self, lits: Sequence[int]) -> None:
        # Only callable between solves (decision level 0). Root-level
        # assignments are permanent, so clauses satisfied at root can be
        # dropped and root-false literals stripped; duplicates collapse and
        # tautologies are skipped.
        assert not self.trail_lim
        if self.root_conflict:
            return
        seen: set[int] = set()
        clause: list[int] = []
        for lit in lits:
            if lit in seen:
                continue
            if -lit in seen:
                return  # tautology
            seen.add(lit)
            clause.append(lit)
        if clause:
            self.ensure_vars(max(abs(lit) for lit in clause))
        if any(self.vals[lit] == 1 for lit in clause):
            return
        free = [lit for lit in clause if self.vals[lit] == 0]
        if not free:
            self.root_conflict = True
            return
        if len(free) == 1:
            self._enqueue(free[0], None)
            if self._propagate() is not None:
                self.root_conflict = True
            return
        self.watches[free[0]].append(free)
        self.watches[free[1]].append(free)

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        var = lit if lit > 0 else -lit
        self.vals[lit] = 1
        self.vals[-lit] = -1
        self.reason[var] = reason
        self.level[var] = len(self.trail_lim)
        self.trail.append(lit)

    def _propagate(self) -> list[int] | None:
        trail = self.trail
        vals = self.vals
        watches = self.watches
        reason = self.reason
        level = self.level
        qhead = self.qhead
        depth = len(self.trail_lim)
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            wl = watches[false_lit]
            i = j = 0
            n = len(wl)
            while i < n:
                clause = wl[i]
                i += 1
                first = clause[0]
                if first == false_lit:
                    first = clause[1]
                    clause[0] = first
                    clause[1] = false_lit
                v0 = vals[first]
                if v0 == 1:
                    wl[j] = clause
                    j += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    other = clause[k]
                    if vals[other] != -1:
                        clause[1] = other
                        clause[k] = false_lit
                        watches[other].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                wl[j] = clause
                j += 1
                if v0 == -1:
                    while i < n:  # keep the rest of the watch list intact
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    self.qhead = len(trail)
                    return clause
                var = first if first > 0 else -first
                vals[first] = 1
                vals[-first] = -1
                reason[var] = clause
                level[var] = depth
                trail.append(first)
            del wl[j:]
        self.qhead = qhead
        return None

    def _decide(self, lit: int, flipped: bool = False, saved: set[int] | None = None) -> None:
        self.trail_lim.append(len(self.trail))
        self.dec_lit.append(lit)
        self.dec_flipped.append(flipped)
        self.dec_saved.append(saved)
        self._enqueue(lit, None)

    def _undo_level(self) -> None:
        start = self.trail_lim.pop()
        vals = self.vals
        reason = self.reason
        for lit in self.trail[start:]:
            vals[lit] = 0
            vals[-lit] = 0
            reason[lit if lit > 0 else -lit] = None
        del self.trail[start:]
        self.dec_lit.pop()
        self.dec_flipped.pop()
        self.dec_saved.pop()
        self.qhead = start

    def _backtrack_to_root(self) -> None:
        while self.trail_lim:
            self._undo_level()

    def _dep_levels_of_vars(self, seeds: Iterable[int]) -> set[int]:
        # Decision levels implicated in the implication graph above the seeds.
        level = self.level
        reason = self.reason
        deps: set[int] = set()
        seen: set[int] = set()
        stack = [v for v in seeds if level[v] > 0]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = reason[v]
            if r is None:
                deps.add(level[v])
            else:
                for lit in r:
                    w = lit if lit > 0 else -lit
                    if w != v and level[w] > 0 and w not in seen:
                        stack.append(w)
        return deps

    def _core_from_levels(self, levels: set[int], extra: Iterable[int] = ()) -> frozenset[int]:
        core = set(extra)
        for lvl in levels:
            core.add(self.dec_lit[lvl - 1])
        return frozenset(core)

    def solve(self, assumptions: Sequence[int]) -> tuple[bool, frozenset[int]]:
        """Returns (True, model literals) or (False, assumption core)."""
        if self.root_conflict:
            return False, frozenset()
        self._suspended = False
        self._backtrack_to_root()
        if self._propagate() is not None:
            self.root_conflict = True
            return False, frozenset()

        for a in assumptions:
            val = self.vals[a]
            if val == 1:
                continue
            if val == -1:
                levels = self._dep_levels_of_vars([abs(a)])
                core = self._core_from_levels(levels, extra=[a])
                self._backtrack_to_root()
                return False, core
            self._decide(a)
            conflict = self._propagate()
            if conflict is not None:
                levels = self._dep_levels_of_vars(abs(lit) for lit in conflict)
                core = self._core_from_levels(levels)
                self._backtrack_to_root()
                return False, core
        num_assumption_levels = len(self.trail_lim)
        if num_assumption_levels:
            return self._search_with_deps(num_assumption_levels)
        return self._search_plain()

    def _flip_deepest(self) -> bool:
        # Chronological backtracking: revisit the deepest decision whose
        # opposite polarity is untried. False when the tree is exhausted.
        while self.trail_lim:
            lit = self.dec_lit[-1]
            flipped = self.dec_flipped[-1]
            self._undo_level()
            if not flipped:
                self._decide(-lit, flipped=True)
                return True
        return False

    def _search_plain(self, suspend: bool = False) -> tuple[bool, frozenset[int]]:
        # Chronological search; no dependency tracking is needed because
        # there are no assumptions to blame: exhaustion means UNSAT outright.
        # With ``suspend`` the search state is kept on SAT so the caller can
        # block the found model and continue where it left off.
        vals = self.vals
        num_vars = self.num_vars
        next_var = 1
        while True:
            if self._propagate() is not None:
                if not self._flip_deepest():
                    self.root_conflict = True
                    return False, frozenset()
                next_var = 1
                continue
            v = next_var
            while v <= num_vars and vals[v] != 0:
                v += 1
            if v > num_vars:
                model = frozenset(self.trail)
                if suspend:
                    self._suspended = True
                else:
                    self._backtrack_to_root()
                return True, model
            next_var = v
            self._decide(v)

    def solve_suspend(self) -> tuple[bool, frozenset[int]]:
        """Assumption-free solve that keeps the search state on SAT, so the
        next model can be found by :meth:`block_and_continue`."""
        if self.root_conflict:
            return False, frozenset()
        self._suspended = False
        self._backtrack_to_root()
        if self._propagate() is not None:
            self.root_conflict = True
            return False, frozenset()
        return self._search_plain(suspend=True)

    def block_and_continue(self, lits: Sequence[int]) -> tuple[bool, frozenset[int]]:
        """Install a blocking clause for the model of a suspended search and
        resume it. The clause must be falsified by the suspended assignment
        (a blocking clause always is), so resuming starts with a polarity
        flip which in turn satisfies the new clause."""
        assert self._suspended
        self._suspended = False
        clause = list(dict.fromkeys(lits))
        if not clause:
            self._backtrack_to_root()
            self.root_conflict = True
            return False, frozenset()
        if not self._flip_deepest():
            self.root_conflict = True
            return False, frozenset()
        if len(clause) == 1:
            clause = clause * 2  # watch both positions on the same literal
        else:
            for idx, lit in enumerate(clause):
                if self.vals[lit] == 1:  # the flipped literal
                    clause[0], clause[idx] = clause[idx], clause[0]
                    break
        self.watches[clause[0]].append(clause)
        self.watches[clause[1]].append(clause)
        return self._search_plain(suspend=True)

    def _search_with_deps(self, num_assumption_levels: int) -> tuple[bool, frozenset[int]]:
        # As above, but each conflict is resolved against the decision levels
        # it actually depends on: independent levels are never flipped, and
        # the dependency set that survives bubbling up to the assumption
        # boundary is exactly the failing assumption core.
        vals = self.vals
        num_vars = self.num_vars
        next_var = 1
        while True:
            v = next_var
            while v <= num_vars and vals[v] != 0:
                v += 1
            if v > num_vars:
                model = frozenset(self.trail)
                self._backtrack_to_root()
                return True, model
            next_var = v
            self._decide(v)
            while True:
                conflict = self._propagate()
                if conflict is None:
                    break
                deps = self._dep_levels_of_vars(abs(lit) for lit in conflict)
                while True:
                    if len(self.trail_lim) <= num_assumption_levels:
                        core = self._core_from_levels(deps)
                        self._backtrack_to_root()
                        return False, core
                    lvl = len(self.trail_lim)
                    lit = self.dec_lit[-1]
                    flipped = self.dec_flipped[-1]
                    saved = self.dec_saved[-1]
                    self._undo_level()
                    if not flipped and lvl in deps:
                        deps.discard(lvl)
                        self._decide(-lit, flipped=True, saved=deps)
                        break
                    # Level exhausted, or the failure did not depend on it
                    # (the flipped branch would fail identically): bubble up.
                    deps.discard(lvl)
                    if flipped and saved:
                        deps |= saved
                next_var = 1


class BuiltinBackend:
    """Adapter presenting the built-in search via the incremental calling
    convention (add / assume+solve / value / failed assumption)."""

    def __init__(self):
        self._engine = _WatchedLiteralSolver()
        self._model: frozenset[int] = frozenset()
        self._core: frozenset[int] = frozenset()

    def ensure_vars(self, n: int) -> None:
        self._engine.ensure_vars(n)

    def add(self, lits: Sequence[int]) -> None:
        self._engine.add_clause(lits)

    def solve(self, assumptions: Sequence[int]) -> bool:
        return self._store(self._engine.solve(assumptions))

    def solve_suspend(self) -> bool:
        return self._store(self._engine.solve_suspend())

    def block_and_continue(self, lits: Sequence[int]) -> bool:
        return self._store(self._engine.block_and_continue(lits))

    def _store(self, result: tuple[bool, frozenset[int]]) -> bool:
        sat, payload = result
        if sat:
            self._model, self._core = payload, frozenset()
        else:
            self._model, self._core = frozenset(), payload
        return sat

    def value(self, var: int) -> bool:
        return var in self._model

    def failed(self, lit: int) -> bool:
        return lit in self._core


_BACKENDS: dict[str, Callable[[], object]] = {"builtin": BuiltinBackend}


def register_backend(name: str, factory: Callable[[], object]) -> None:
    """Register an external solver backend honoring the BuiltinBackend contract."""
    _BACKENDS[name] = factory


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


class UnknownBackendError(ValueError):
    pass


class SolverSession:
    """One incremental solving session over a loaded formula.

    Clause additions are permanent; assumptions hold for a single solve call.
    Models are truncated to the original variables, so activation plumbing
    never leaks into caller-visible literal sets. Not thread-safe: use one
    session per worker.
    """

    def __init__(self, formula: CnfFormula, backend: str | None = None):
        name = backend or os.environ.get(ENV_BACKEND, "builtin")
        try:
            factory = _BACKENDS[name]
        except KeyError:
            raise UnknownBackendError(
                f"unknown solver backend {name!r}; available: {available_backends()}"
            ) from None
        self.backend_name = name
        self._backend = factory()
        self.num_original_vars = formula.num_vars
        self._next_activation_var = formula.num_vars + 1
        self.num_solve_calls = 0
        self._switchable = 0
        self._backend.ensure_vars(formula.num_vars)
        for clause in formula.clauses:
            self._backend.add(clause)

    def solve(self, assumptions: Iterable[Lit] = ()) -> SolveOutcome:
        assumed = list(assumptions)
        self.num_solve_calls += 1
        if self._backend.solve(assumed):
            return SolveOutcome(sat=True, model=self._model_from_backend())
        core = LiteralSet(lit for lit in assumed if self._backend.failed(lit))
        return SolveOutcome(sat=False, core=core)

    def add_clause(self, lits: Iterable[Lit]) -> None:
        self._backend.add(list(lits))

    def add_switchable_clause(self, lits: Iterable[Lit]) -> ActivationHandle:
        """Add (lits | a) with a fresh activation variable a."""
        a = self._next_activation_var
        self._next_activation_var += 1
        self._backend.ensure_vars(a)
        self._backend.add(list(lits) + [a])
        self._switchable += 1
        return ActivationHandle(var=a)

    def _model_from_backend(self) -> LiteralSet:
        value = self._backend.value
        return LiteralSet._wrap(frozenset(
            v if value(v) else -v for v in range(1, self.num_original_vars + 1)
        ))

    def iter_solutions(self):
        """Yield distinct total models, adding a blocking clause after each.

        Each yielded model costs one solve call, and the terminal UNSAT that
        proves exhaustion costs one more. The blocking clauses stay in the
        session permanently. The built-in backend resumes its suspended
        search instead of restarting from scratch; backends without that
        capability fall back to plain re-solving.
        """
        if self._switchable:
            raise RuntimeError("solution enumeration requires a session without switchable clauses")
        suspend = getattr(self._backend, "solve_suspend", None)
        resume = getattr(self._backend, "block_and_continue", None)
        if suspend is None or resume is None:
            while True:
                outcome = self.solve()
                if not outcome.sat:
                    return
                yield outcome.model
                self.add_clause([-lit for lit in outcome.model])
            return
        self.num_solve_calls += 1
        sat = suspend()
        while sat:
            model = self._model_from_backend()
            yield model
            self.num_solve_calls += 1
            sat = resume([-lit for lit in model])

    def enumerate_solutions(self, limit: int | None = None) -> tuple[list[LiteralSet], bool]:
        """Enumerate distinct total models via :meth:`iter_solutions`.

        Returns (models, exhausted): exhausted is True iff a final solve
        returned UNSAT before the limit cut enumeration short. When
        exhausted, m models cost exactly m+1 solve calls.
        """
        models: list[LiteralSet] = []
        solutions = self.iter_solutions()
        while limit is None or len(models) < limit:
            model = next(solutions, None)
            if model is None:
                return models, True
            models.append(model)
        return models, False


def new_session(formula: CnfFormula, backend: str | None = None) -> SolverSession:
    """Load a formula into a fresh incremental session; performs no solving."""
    return SolverSession(formula, backend=backend)
