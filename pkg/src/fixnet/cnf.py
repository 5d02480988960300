"""
CNF formulas and the DIMACS format.

Literals are signed integers as in DIMACS: ``r`` is λ_r and ``-r`` is ¬λ_r.
Assignments are packed integers where bit r-1 holds λ_r.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Sequence, Tuple

from .errors import FormatError

logger = logging.getLogger(__name__)

Clause = Tuple[int, ...]


def normalize_clause(literals: Iterable[int]) -> Clause:
    """Collapse duplicate literals; order by variable, positive literal first."""
    return tuple(sorted(set(literals), key=lambda lit: (abs(lit), lit < 0)))


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of non-empty clauses over variables 1..n."""

    n: int
    clauses: Tuple[Clause, ...]
    names: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        normalized = []
        for number, clause in enumerate(self.clauses, start=1):
            if not clause:
                raise FormatError(f"clause {number} is empty")
            if any(lit == 0 or abs(lit) > self.n for lit in clause):
                raise FormatError(f"clause {number} mentions a variable outside 1..{self.n}")
            normalized.append(normalize_clause(clause))
        object.__setattr__(self, "clauses", tuple(normalized))

    @classmethod
    def of(cls, n: int, clauses: Sequence[Iterable[int]]) -> "CnfFormula":
        return cls(n, tuple(tuple(c) for c in clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def name(self, var: int) -> str:
        return self.names.get(var, f"x{var}")

    def clause_satisfied(self, clause: Clause, assignment: int) -> bool:
        for lit in clause:
            value = (assignment >> (abs(lit) - 1)) & 1
            if (lit > 0) == bool(value):
                return True
        return False

    def satisfied_by(self, assignment: int) -> bool:
        return all(self.clause_satisfied(c, assignment) for c in self.clauses)

    def with_clauses(self, extra: Sequence[Iterable[int]], n: int | None = None) -> "CnfFormula":
        return CnfFormula(
            self.n if n is None else n,
            self.clauses + tuple(tuple(c) for c in extra),
            dict(self.names),
        )

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.n} {self.m}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Read ``p cnf n m`` followed by 0-terminated clauses (``c`` lines are comments)."""
    n: int | None = None
    declared = 0
    clauses: List[List[int]] = []
    pending: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError("problem line reads 'p cnf <n> <m>'", number)
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError as e:
                raise FormatError("problem line counts must be integers", number) from e
            continue
        if n is None:
            raise FormatError("clause before problem line", number)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError as e:
                raise FormatError(f"bad literal {token!r}", number) from e
            if lit == 0:
                if not pending:
                    raise FormatError("empty clause", number)
                clauses.append(pending)
                pending = []
            else:
                if abs(lit) > n:
                    raise FormatError(f"literal {lit} exceeds {n} variables", number)
                pending.append(lit)
    if n is None:
        raise FormatError("missing problem line")
    if pending:
        clauses.append(pending)
    if declared != len(clauses):
        logger.warning(f"DIMACS header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula.of(n, clauses)
