"""Shared fixtures: worked-example formulas and the random test corpus.

Variable encodings used by the fixtures (fixed by this test suite):

Six-clause example formula (clause set {{-a},{-a,b},{a,c},{-c,d},{-c,e,f},{f,-g}}):
    a..g -> 1..7; its backbone under this encoding is {-1, 3, 4}.

BusyBox feature snippet:
    1 STATIC, 2 PIE, 3 FEATURE_PREFER_APPLETS, 4 BUILD_LIBBUSYBOX,
    5 FEATURE_INDIVIDUAL, 6 FEATURE_SHARED_BUSYBOX.

Kconfig/C dead-code example:
    1 USB_HID, 2 USB, 3 INPUT, 4 B1, 5 B2, 6 B3.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vmbackbone import CnfFormula

from oracle import brute_sat

TABLE1_CLAUSES = ((-1,), (-1, 2), (1, 3), (-3, 4), (-3, 5, 6), (6, -7))
TABLE1_DIMACS = """\
p cnf 7 6
-1 0
-1 2 0
1 3 0
-3 4 0
-3 5 6 0
6 -7 0
"""
TABLE1_BACKBONE = frozenset({-1, 3, 4})

BUSYBOX_CLAUSES = ((-1, -2), (-4, -3), (-4, -2), (-4, -1), (-5, 4), (-6, 4))
BUSYBOX_NAMES = {
    1: "STATIC",
    2: "PIE",
    3: "FEATURE_PREFER_APPLETS",
    4: "BUILD_LIBBUSYBOX",
    5: "FEATURE_INDIVIDUAL",
    6: "FEATURE_SHARED_BUSYBOX",
}

DEADCODE_CLAUSES = ((-1, 2), (-1, 3), (-4, 1), (-5, 1), (-5, 3), (-6, 1), (-6, -3))


@pytest.fixture(scope="session")
def table1() -> CnfFormula:
    return CnfFormula(num_vars=7, clauses=TABLE1_CLAUSES)


@pytest.fixture(scope="session")
def busybox() -> CnfFormula:
    return CnfFormula(num_vars=6, clauses=BUSYBOX_CLAUSES)


@pytest.fixture(scope="session")
def deadcode() -> CnfFormula:
    return CnfFormula(num_vars=6, clauses=DEADCODE_CLAUSES)


def random_cnf(rng: random.Random, min_vars=5, max_vars=12, min_clauses=2, max_clauses=40) -> CnfFormula:
    """One random CNF with clause lengths weighted toward at most 2 literals,
    mirroring the structural profile of variability-model formulas."""
    num_vars = rng.randint(min_vars, max_vars)
    num_clauses = rng.randint(min_clauses, max_clauses)
    clauses = []
    for _ in range(num_clauses):
        r = rng.random()
        if r < 0.15:
            length = 1
        elif r < 0.97:
            length = 2
        else:
            length = 3
        length = min(length, num_vars)
        variables = rng.sample(range(1, num_vars + 1), length)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return CnfFormula(num_vars=num_vars, clauses=tuple(clauses))


def satisfiable_corpus(seed: int, count: int, **kwargs) -> list[CnfFormula]:
    """Deterministic corpus of satisfiable random formulas."""
    rng = random.Random(seed)
    corpus = []
    while len(corpus) < count:
        formula = random_cnf(rng, **kwargs)
        if brute_sat(formula):
            corpus.append(formula)
    return corpus


@pytest.fixture(scope="session")
def corpus500() -> list[CnfFormula]:
    return satisfiable_corpus(seed=20240811, count=500)


@pytest.fixture(scope="session")
def corpus100(corpus500) -> list[CnfFormula]:
    return corpus500[:100]
