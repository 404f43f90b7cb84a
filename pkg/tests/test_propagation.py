import pytest

from vmbackbone import (
    AlreadyDecidedError,
    CnfFormula,
    ConfigSession,
    ConflictingDecisionsError,
    LiteralSet,
    NotADecisionError,
    UnsatisfiableInputError,
    classify_variables,
    propagate,
)

from conftest import satisfiable_corpus
from oracle import brute_backbone, brute_sat


def test_busybox_static_propagation(busybox):
    result = propagate(busybox, [1])  # select STATIC
    assert result.decided == LiteralSet([1])
    assert result.implied_false == frozenset({2, 4, 5, 6})
    assert result.implied_true == frozenset()
    assert result.free == frozenset({3})


def test_busybox_two_decision_propagation(busybox):
    # Select BUILD_LIBBUSYBOX, exclude FEATURE_PREFER_APPLETS.
    result = propagate(busybox, [4, -3])
    assert result.implied_false == frozenset({1, 2})
    assert result.implied_true == frozenset()
    assert result.free == frozenset({5, 6})


def test_busybox_conflicting_decisions(busybox):
    assert not brute_sat(CnfFormula(6, busybox.clauses + ((1,), (2,))))
    with pytest.raises(ConflictingDecisionsError):
        propagate(busybox, [1, 2])


def test_propagation_equals_backbone_of_conjoined_formula(busybox):
    for decisions in ([1], [4, -3], [-1], [6]):
        result = propagate(busybox, decisions)
        conjoined = CnfFormula(6, busybox.clauses + tuple((d,) for d in decisions))
        expected = brute_backbone(conjoined)
        decided_vars = {abs(d) for d in decisions}
        assert result.implied_true == {l for l in expected if l > 0 and l not in decided_vars}
        assert result.implied_false == {-l for l in expected if l < 0 and -l not in decided_vars}


def test_propagation_partition_on_corpus():
    for formula in satisfiable_corpus(seed=41, count=20, max_vars=9):
        result = propagate(formula, [])
        groups = [result.implied_true, result.implied_false, result.free]
        assert frozenset().union(*groups) == frozenset(range(1, formula.num_vars + 1))
        assert sum(len(g) for g in groups) == formula.num_vars


def test_decision_outside_variables_rejected(busybox):
    with pytest.raises(ValueError):
        propagate(busybox, [7])


def test_classify_deadcode(deadcode):
    classes = classify_variables(deadcode)
    assert classes.dead == frozenset({6})
    assert classes.core == frozenset()
    assert classes.free == frozenset({1, 2, 3, 4, 5})


def test_classify_small_fixture():
    formula = CnfFormula(2, ((1,), (1, 2)))
    classes = classify_variables(formula)
    assert classes.core == frozenset({1})
    assert classes.free == frozenset({2})
    assert classes.dead == frozenset()


def test_classify_busybox_alone_all_free(busybox):
    assert brute_backbone(busybox) == frozenset()
    classes = classify_variables(busybox)
    assert classes.free == frozenset(range(1, 7))


def test_classify_unsatisfiable_input():
    with pytest.raises(UnsatisfiableInputError):
        classify_variables(CnfFormula(1, ((1,), (-1,))))


def test_session_assert_and_cached_result(busybox):
    session = ConfigSession(busybox)
    assert session.result.free == frozenset(range(1, 7))
    result = session.assert_decision(1)
    assert result.implied_false == frozenset({2, 4, 5, 6})
    assert session.result == result
    assert session.decisions == (1,)


def test_session_conflict_rolls_back(busybox):
    session = ConfigSession(busybox)
    session.assert_decision(1)
    before = session.result
    with pytest.raises(ConflictingDecisionsError):
        session.assert_decision(2)  # PIE conflicts with STATIC
    assert session.result == before
    assert session.decisions == (1,)


def test_session_rejects_double_decision(busybox):
    session = ConfigSession(busybox)
    session.assert_decision(1)
    with pytest.raises(AlreadyDecidedError):
        session.assert_decision(-1)


def test_deciding_an_implied_literal_only_moves_it_to_decided(busybox):
    session = ConfigSession(busybox)
    session.assert_decision(1)
    implied_before = session.result.implied_false
    result = session.assert_decision(-2)  # -2 was already implied
    assert result.decided == LiteralSet([1, -2])
    assert result.implied_false == implied_before - {2}
    assert result.implied_true == frozenset()
    assert result.free == frozenset({3})


def test_retract_restores_fresh_state(busybox):
    fresh = ConfigSession(busybox).result
    session = ConfigSession(busybox)
    session.assert_decision(1)
    result = session.retract_decision(1)
    assert result == fresh
    assert session.decisions == ()


def test_retract_one_of_two_equals_recomputation(busybox):
    session = ConfigSession(busybox)
    session.assert_decision(4)
    session.assert_decision(-3)
    result = session.retract_decision(4)
    assert result == propagate(busybox, [-3])
    assert session.decisions == (-3,)


def test_retract_implied_variable_is_not_a_decision(busybox):
    session = ConfigSession(busybox)
    session.assert_decision(1)
    with pytest.raises(NotADecisionError):
        session.retract_decision(2)  # implied, not decided
