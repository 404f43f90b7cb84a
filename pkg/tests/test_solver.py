import itertools
import random

import pytest

from vmbackbone import CnfFormula, LiteralSet, UnknownBackendError, new_session, register_backend

from conftest import random_cnf, satisfiable_corpus
from oracle import brute_backbone, brute_count, brute_sat, satisfies


class ExhaustiveBackend:
    """Independent adapter honoring the solver calling convention
    (add / solve-with-assumptions / value / failed): checks all assignments.

    Cores are the full assumption set, which the contract permits (cores need
    not be minimal).
    """

    def __init__(self):
        self.num_vars = 0
        self.clauses = []
        self._model = frozenset()
        self._core = frozenset()

    def ensure_vars(self, n):
        self.num_vars = max(self.num_vars, n)

    def add(self, lits):
        self.clauses.append(list(lits))

    def solve(self, assumptions):
        for bits in itertools.product((False, True), repeat=self.num_vars):
            model = frozenset(v if bits[v - 1] else -v for v in range(1, self.num_vars + 1))
            if not all(lit in model for lit in assumptions):
                continue
            if all(any(lit in model for lit in clause) for clause in self.clauses):
                self._model, self._core = model, frozenset()
                return True
        self._model, self._core = frozenset(), frozenset(assumptions)
        return False

    def value(self, var):
        return var in self._model

    def failed(self, lit):
        return lit in self._core


register_backend("exhaustive-test", ExhaustiveBackend)


def test_new_session_table1(table1):
    session = new_session(table1)
    assert session.num_original_vars == 7
    assert session.num_solve_calls == 0


def test_unknown_backend_rejected(table1):
    with pytest.raises(UnknownBackendError):
        new_session(table1, backend="no-such-solver")


def test_empty_formula_is_sat_with_empty_model():
    outcome = new_session(CnfFormula(0, ())).solve()
    assert outcome.sat
    assert outcome.model == LiteralSet()


def test_solve_agrees_with_brute_force_on_random_formulas():
    rng = random.Random(3)
    for _ in range(100):
        formula = random_cnf(rng, min_vars=1, max_vars=12)
        assert new_session(formula).solve().sat == brute_sat(formula)


def test_table1_model_satisfies_every_clause(table1):
    outcome = new_session(table1).solve()
    assert outcome.sat
    model = frozenset(outcome.model)
    assert len(model) == 7
    assert satisfies(table1, model)
    # The example solution from the worked fixture is indeed a model.
    assert satisfies(table1, frozenset({-1, -2, 3, 4, 5, -6, -7}))


def test_table1_unsat_under_conflicting_assumptions(table1):
    session = new_session(table1)
    outcome = session.solve(LiteralSet([1, 2, -3]))
    assert not outcome.sat
    core = outcome.core
    assert core.issubset(LiteralSet([1, 2, -3]))
    assert len(core) >= 1
    # Core soundness: the formula plus the core literals as units is UNSAT.
    strengthened = CnfFormula(7, table1.clauses + tuple((lit,) for lit in core))
    assert not new_session(strengthened).solve().sat


def test_assuming_a_unit_literal(table1):
    formula = CnfFormula(1, ((1,),))
    outcome = new_session(formula).solve([1])
    assert outcome.sat
    assert outcome.model == LiteralSet([1])


def test_assumptions_do_not_persist(table1):
    session = new_session(table1)
    assert not session.solve([1]).sat  # -1 is backbone
    after = session.solve()
    assert after.sat  # assumption cleared


def test_disjoint_assumptions_are_order_independent(table1):
    first = new_session(table1)
    a = first.solve([2]).sat
    b = first.solve([-5]).sat
    second = new_session(table1)
    b2 = second.solve([-5]).sat
    a2 = second.solve([2]).sat
    assert (a, b) == (a2, b2)


def test_add_clause_contradiction_makes_session_unsat():
    session = new_session(CnfFormula(1, ()))
    session.add_clause([-1])
    session.add_clause([1])
    outcome = session.solve()
    assert not outcome.sat
    # Also via an explicitly empty clause.
    other = new_session(CnfFormula(1, ()))
    other.add_clause([])
    assert not other.solve().sat


def test_cores_are_sound_across_random_unsat_queries():
    rng = random.Random(17)
    checked = 0
    for formula in satisfiable_corpus(seed=99, count=40, max_vars=10):
        session = new_session(formula)
        assumed = LiteralSet(
            v if rng.random() < 0.5 else -v
            for v in rng.sample(range(1, formula.num_vars + 1), min(4, formula.num_vars))
        )
        outcome = session.solve(assumed)
        if outcome.sat:
            assert assumed.issubset(outcome.model)
            continue
        core = outcome.core
        assert core.issubset(assumed)
        strengthened = CnfFormula(
            formula.num_vars, formula.clauses + tuple((lit,) for lit in core)
        )
        assert not brute_sat(strengthened)
        checked += 1
    assert checked > 0


def test_switchable_clause_enables_and_disables():
    session = new_session(CnfFormula(1, ()))
    handle = session.add_switchable_clause([1])
    enabled = session.solve([handle.enable])
    assert enabled.sat and 1 in enabled.model
    # Disabled: both polarities of x remain reachable.
    assert session.solve([handle.disable, 1]).sat
    assert session.solve([handle.disable, -1]).sat


def test_disabled_switchable_clauses_keep_original_satisfiability():
    rng = random.Random(23)
    for _ in range(100):
        formula = random_cnf(rng, min_vars=2, max_vars=10)
        session = new_session(formula)
        for _ in range(3):
            size = rng.randint(1, formula.num_vars)
            lits = [v if rng.random() < 0.5 else -v
                    for v in rng.sample(range(1, formula.num_vars + 1), size)]
            session.add_switchable_clause(lits)
        assert session.solve().sat == brute_sat(formula)


def test_switchable_models_do_not_leak_activation_variables(table1):
    session = new_session(table1)
    handle = session.add_switchable_clause([2, 5])
    outcome = session.solve([handle.enable])
    assert outcome.sat
    assert all(abs(lit) <= 7 for lit in outcome.model)


def test_enumerate_table1_models(table1):
    session = new_session(table1)
    models, exhausted = session.enumerate_solutions()
    assert exhausted
    assert len(models) == 10
    assert session.num_solve_calls == 11
    assert len(set(models)) == 10
    for model in models:
        assert satisfies(table1, frozenset(model))


def test_enumerate_single_unit_formula():
    models, exhausted = new_session(CnfFormula(1, ((1,),))).enumerate_solutions()
    assert exhausted
    assert models == [LiteralSet([1])]


def test_enumerate_unconstrained_two_vars():
    models, exhausted = new_session(CnfFormula(2, ())).enumerate_solutions()
    assert exhausted
    assert len(models) == 4


def test_enumerate_respects_limit(table1):
    session = new_session(table1)
    models, exhausted = session.enumerate_solutions(limit=3)
    assert not exhausted
    assert len(models) == 3
    assert session.num_solve_calls == 3


def test_enumerate_counts_match_brute_force():
    for formula in satisfiable_corpus(seed=5, count=30, max_vars=8, max_clauses=12):
        models, exhausted = new_session(formula).enumerate_solutions()
        assert exhausted
        assert len(models) == brute_count(formula)


def test_adding_backbone_unit_clause_preserves_backbone():
    checked = 0
    for formula in satisfiable_corpus(seed=77, count=25, max_vars=9, max_clauses=20):
        backbone = brute_backbone(formula)
        if not backbone:
            continue
        session = new_session(formula)
        session.add_clause([min(backbone, key=abs)])
        models, exhausted = session.enumerate_solutions()
        assert exhausted
        intersected = frozenset.intersection(*(frozenset(m) for m in models))
        assert intersected == backbone
        checked += 1
    assert checked > 0


def test_backends_agree_on_satisfiability():
    # The built-in solver and a registered adapter agree on SAT/UNSAT across
    # the corpus; models and cores may legitimately differ.
    rng = random.Random(31)
    for formula in satisfiable_corpus(seed=7, count=15, max_vars=8):
        assumed = LiteralSet(
            v if rng.random() < 0.5 else -v
            for v in rng.sample(range(1, formula.num_vars + 1), 3)
        )
        builtin = new_session(formula, backend="builtin").solve(assumed)
        adapter = new_session(formula, backend="exhaustive-test").solve(assumed)
        assert builtin.sat == adapter.sat
        if not builtin.sat:
            assert adapter.core.issubset(assumed)


def test_default_backend_from_environment(table1, monkeypatch):
    monkeypatch.setenv("VMBACKBONE_SOLVER", "exhaustive-test")
    session = new_session(table1)
    assert session.backend_name == "exhaustive-test"
    assert session.solve().sat
    monkeypatch.setenv("VMBACKBONE_SOLVER", "missing-backend")
    with pytest.raises(UnknownBackendError):
        new_session(table1)


def test_generic_backend_enumeration_fallback(table1):
    # Adapters without suspend/continue support enumerate by re-solving.
    session = new_session(table1, backend="exhaustive-test")
    models, exhausted = session.enumerate_solutions()
    assert exhausted
    assert len(models) == 10
    assert session.num_solve_calls == 11
