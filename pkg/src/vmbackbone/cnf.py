"""CNF data model, DIMACS parsing/serialization and structural statistics.

Literals are signed non-zero integers in the DIMACS convention: ``v`` asserts
variable ``v``, ``-v`` negates it. A clause is a tuple of literals, a formula
is a variable count plus a tuple of clauses.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Iterable, Iterator

Lit = int
Clause = tuple[Lit, ...]


class DimacsParseError(ValueError):
    """Raised for inputs that are not well-formed DIMACS CNF."""


class EmptyClauseError(DimacsParseError):
    """An empty clause in the input: the formula is trivially unsatisfiable.

    Kept distinct from solve-time UNSAT so the "satisfiable formula"
    precondition of the backbone algorithms is checkable before any solver
    work.
    """


def negate(lit: Lit) -> Lit:
    return -lit


def var_of(lit: Lit) -> int:
    return abs(lit)


class LiteralSet:
    """An immutable set of non-contradictory literals.

    Holds at most one polarity per variable; construction fails on ``0`` or on
    a variable appearing with both signs. Iteration is sorted by variable
    index, which the backbone algorithms rely on for deterministic candidate
    order.
    """

    __slots__ = ("_lits",)

    def __init__(self, literals: Iterable[Lit] = ()):
        lits = frozenset(literals)
        for lit in lits:
            if lit == 0:
                raise ValueError("0 is not a literal")
            if -lit in lits:
                raise ValueError(f"contradictory literals {lit} and {-lit}")
        self._lits = lits

    @classmethod
    def _wrap(cls, lits: frozenset[Lit]) -> "LiteralSet":
        # Internal constructor for results of set operations, which cannot
        # introduce contradictions or zeros.
        obj = cls.__new__(cls)
        obj._lits = lits
        return obj

    def __contains__(self, lit: Lit) -> bool:
        return lit in self._lits

    def __iter__(self) -> Iterator[Lit]:
        return iter(sorted(self._lits, key=abs))

    def __len__(self) -> int:
        return len(self._lits)

    def __bool__(self) -> bool:
        return bool(self._lits)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LiteralSet):
            return self._lits == other._lits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._lits)

    def __repr__(self) -> str:
        return f"LiteralSet({sorted(self._lits, key=abs)})"

    def __or__(self, other: "LiteralSet") -> "LiteralSet":
        return LiteralSet(self._lits | other._lits)

    def __and__(self, other: "LiteralSet") -> "LiteralSet":
        return LiteralSet._wrap(self._lits & other._lits)

    def __sub__(self, other: "LiteralSet") -> "LiteralSet":
        return LiteralSet._wrap(self._lits - other._lits)

    def union(self, other: "LiteralSet") -> "LiteralSet":
        return self | other

    def intersection(self, other: "LiteralSet") -> "LiteralSet":
        return self & other

    def difference(self, other: "LiteralSet") -> "LiteralSet":
        return self - other

    def issubset(self, other: "LiteralSet") -> bool:
        return self._lits <= other._lits

    def complement(self) -> "LiteralSet":
        """Negate every literal: {a, -b} -> {-a, b}."""
        return LiteralSet._wrap(frozenset(-lit for lit in self._lits))

    def variables(self) -> frozenset[int]:
        return frozenset(abs(lit) for lit in self._lits)

    def add(self, lit: Lit) -> "LiteralSet":
        if -lit in self._lits:
            raise ValueError(f"contradictory literals {lit} and {-lit}")
        if lit == 0:
            raise ValueError("0 is not a literal")
        return LiteralSet._wrap(self._lits | {lit})

    def discard(self, lit: Lit) -> "LiteralSet":
        return LiteralSet._wrap(self._lits - {lit})


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula: declared variable count plus normalized clauses."""

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")

    def literal_universe(self) -> list[Lit]:
        """All 2n literals, ascending by variable, positive first."""
        out = []
        for v in range(1, self.num_vars + 1):
            out.append(v)
            out.append(-v)
        return out


@dataclass(frozen=True)
class ParsedDimacs:
    """Parse result: the normalized formula plus normalization counters."""

    formula: CnfFormula
    duplicate_literals_removed: int
    tautologies_dropped: int


@dataclass(frozen=True)
class FormulaStats:
    """Structural statistics used for characterization and auto algorithm selection."""

    num_vars: int
    num_clauses: int
    clause_var_ratio: float | None
    median_literals_per_clause: float | None
    pct_clauses_gt2: float
    num_binary_or_unit: int


def parse_dimacs(text: str | bytes) -> ParsedDimacs:
    """Parse DIMACS CNF text into a normalized formula.

    Normalization: duplicate literals within a clause are collapsed and
    tautological clauses (containing both ``l`` and ``-l``) are dropped; both
    are counted in the result. Comment lines (``c``) are ignored.

    Raises :class:`DimacsParseError` on a missing or malformed header, a
    literal exceeding the declared variable count, a clause not terminated by
    0, or a clause-count mismatch with the header; :class:`EmptyClauseError`
    on an empty clause.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    num_vars: int | None = None
    declared_clauses = 0
    tokens: list[int] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError(f"line {lineno}: duplicate header")
            fields = line.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise DimacsParseError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise DimacsParseError(f"line {lineno}: non-numeric header counts") from None
            if num_vars < 0 or declared_clauses < 0:
                raise DimacsParseError(f"line {lineno}: negative header counts")
            continue
        if num_vars is None:
            raise DimacsParseError(f"line {lineno}: clause before header")
        for field in line.split():
            try:
                tokens.append(int(field))
            except ValueError:
                raise DimacsParseError(f"line {lineno}: non-integer token {field!r}") from None

    if num_vars is None:
        raise DimacsParseError("missing 'p cnf' header")

    clauses: list[Clause] = []
    duplicates = 0
    tautologies = 0
    current: list[int] = []
    seen: set[int] = set()
    tautological = False
    clauses_read = 0

    for tok in tokens:
        if tok == 0:
            clauses_read += 1
            if not current and not tautological:
                raise EmptyClauseError(f"clause {clauses_read} is empty (trivially UNSAT input)")
            if tautological:
                tautologies += 1
            else:
                clauses.append(tuple(current))
            current = []
            seen = set()
            tautological = False
            continue
        if abs(tok) > num_vars:
            raise DimacsParseError(f"literal {tok} exceeds declared variable count {num_vars}")
        if tok in seen:
            duplicates += 1
            continue
        if -tok in seen:
            tautological = True
        seen.add(tok)
        if not tautological:
            current.append(tok)

    if current or tautological:
        raise DimacsParseError("last clause not terminated by 0")
    if clauses_read != declared_clauses:
        raise DimacsParseError(
            f"header declares {declared_clauses} clauses but input has {clauses_read}"
        )

    return ParsedDimacs(
        formula=CnfFormula(num_vars=num_vars, clauses=tuple(clauses)),
        duplicate_literals_removed=duplicates,
        tautologies_dropped=tautologies,
    )


def write_dimacs(formula: CnfFormula) -> str:
    """Serialize a formula: header line, then one 0-terminated clause per line."""
    lines = [f"p cnf {formula.num_vars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def formula_stats(formula: CnfFormula) -> FormulaStats:
    """Counts, clause/variable ratio, median clause length, share of >2-literal clauses."""
    num_clauses = len(formula.clauses)
    lengths = [len(clause) for clause in formula.clauses]
    ratio = num_clauses / formula.num_vars if formula.num_vars > 0 else None
    median_len = statistics.median(lengths) if lengths else None
    gt2 = sum(1 for n in lengths if n > 2)
    pct_gt2 = 100.0 * gt2 / num_clauses if num_clauses else 0.0
    return FormulaStats(
        num_vars=formula.num_vars,
        num_clauses=num_clauses,
        clause_var_ratio=ratio,
        median_literals_per_clause=median_len,
        pct_clauses_gt2=pct_gt2,
        num_binary_or_unit=num_clauses - gt2,
    )
