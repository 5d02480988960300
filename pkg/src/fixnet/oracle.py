"""
Brute-force oracles for SAT, #SAT, E-MajSAT, QSAT2 and succinct SAT.

These evaluators work from raw clause lists with their own bit masks and do
not call into the gadget or network code they are used to check.
"""

import hashlib
import logging
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from .cnf import CnfFormula
from .config import Caps, resolve_caps
from .configuration import Configuration
from .errors import ArgumentError, SizeCapError, StructureError
from .succinct import SuccinctRepresentation

logger = logging.getLogger(__name__)

Masks = List[Tuple[int, int]]


class OracleResult(BaseModel):
    """Answer of one exhaustive search."""

    problem: str
    digest: str
    answer: Union[bool, int]
    evaluations: int


def _masks(clauses: Sequence[Sequence[int]]) -> Masks:
    masks = []
    for clause in clauses:
        pos = neg = 0
        for lit in clause:
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        masks.append((pos, neg))
    return masks


def _satisfies(masks: Masks, assignment: int, full: int) -> bool:
    inverted = ~assignment & full
    for pos, neg in masks:
        if not (assignment & pos or inverted & neg):
            return False
    return True


def _check_cap(n: int, caps: Caps) -> None:
    if n > caps.sat_n:
        raise SizeCapError(f"brute-force search needs n <= {caps.sat_n}, got {n}")


def evaluate(formula: CnfFormula, assignment: int) -> bool:
    """ψ under a packed assignment, bit r-1 holding λ_r."""
    return _satisfies(_masks(formula.clauses), assignment, (1 << formula.n) - 1)


def digest(formula: CnfFormula) -> str:
    return hashlib.sha256(formula.to_dimacs().encode()).hexdigest()[:16]


def count_models(formula: CnfFormula, caps: Optional[Caps] = None) -> int:
    caps = resolve_caps(caps)
    _check_cap(formula.n, caps)
    masks = _masks(formula.clauses)
    full = (1 << formula.n) - 1
    return sum(1 for a in range(1 << formula.n) if _satisfies(masks, a, full))


def sat_brute(formula: CnfFormula, caps: Optional[Caps] = None) -> bool:
    return find_model(formula, caps) is not None


def find_model(formula: CnfFormula, caps: Optional[Caps] = None) -> Optional[int]:
    """First satisfying assignment in increasing packed order."""
    caps = resolve_caps(caps)
    _check_cap(formula.n, caps)
    masks = _masks(formula.clauses)
    full = (1 << formula.n) - 1
    for a in range(1 << formula.n):
        if _satisfies(masks, a, full):
            return a
    return None


def alpha(formula: CnfFormula, s: int, prefix: int, caps: Optional[Caps] = None) -> int:
    """Number of extensions of the assignment ``prefix`` of λ_1..λ_s that satisfy ψ."""
    caps = resolve_caps(caps)
    _check_cap(formula.n, caps)
    masks = _masks(formula.clauses)
    full = (1 << formula.n) - 1
    return sum(
        1 for rest in range(1 << (formula.n - s)) if _satisfies(masks, prefix | (rest << s), full)
    )


def alpha_star(formula: CnfFormula, s: int, caps: Optional[Caps] = None) -> Tuple[int, Configuration]:
    """max over z' in {0,1}^s of α(z'), with the first maximiser."""
    if not 1 <= s <= formula.n:
        raise ArgumentError(f"s must lie in 1..{formula.n}, got {s}")
    best, best_prefix = -1, 0
    for prefix in range(1 << s):
        value = alpha(formula, s, prefix, caps)
        if value > best:
            best, best_prefix = value, prefix
    return best, Configuration(tuple(range(1, s + 1)), best_prefix)


def emajsat_brute(formula: CnfFormula, s: int, caps: Optional[Caps] = None) -> bool:
    """Some z' has a satisfying majority of extensions: α* >= 2^{n-s-1}."""
    best, _ = alpha_star(formula, s, caps)
    return 2 * best >= 1 << (formula.n - s)


def qsat2_brute(formula: CnfFormula, s: int, caps: Optional[Caps] = None) -> bool:
    """Some z' has all its extensions satisfying: α* = 2^{n-s}."""
    best, _ = alpha_star(formula, s, caps)
    return best == 1 << (formula.n - s)


def _settle(rep: SuccinctRepresentation, inputs: int) -> int:
    """Iterate h synchronously from the input bits until nothing changes."""
    network = rep.circuit.network
    state = inputs
    for _ in range(network.n + 1):
        following = network.step(state)
        if following == state:
            return state
        state = following
    raise StructureError("circuit did not settle; its gates are not acyclic")


def succinct_literals(rep: SuccinctRepresentation) -> List[Tuple[int, int, int]]:
    """
    Clause literals of Ψ read off the circuit by iterating h, one triple per u.

    Λ_w is variable 1 + w read as a binary number with w_1 most significant;
    the literal is negated when ρ is 0.
    """
    triples = []
    for u in product((0, 1), repeat=rep.m):
        row = []
        for position in ((0, 1), (1, 0), (1, 1)):
            inputs = 0
            for v, b in zip(rep.U + rep.P, u + position):
                inputs |= b << (v - 1)
            x = _settle(rep, inputs)
            var = 1
            for k, v in enumerate(reversed(rep.W)):
                var += ((x >> (v - 1)) & 1) << k
            row.append(var if (x >> (rep.rho - 1)) & 1 else -var)
        triples.append((row[0], row[1], row[2]))
    return triples


def succinct_alpha(rep: SuccinctRepresentation, zeta: Configuration) -> int:
    """Number of clauses of Ψ that ζ satisfies."""
    width = 1 << rep.n
    full = (1 << width) - 1
    state = zeta.state(width)
    return sum(1 for mask in _masks(succinct_literals(rep)) if _satisfies([mask], state, full))


def succinct_sat_brute(rep: SuccinctRepresentation, caps: Optional[Caps] = None) -> Optional[Configuration]:
    """
    Search ζ over Λ directly, asking the circuit for each clause literal.

    Returns the first satisfying ζ, or None.
    """
    caps = resolve_caps(caps)
    width = 1 << rep.n
    _check_cap(width, caps)
    masks = _masks(succinct_literals(rep))
    full = (1 << width) - 1
    for zeta in range(1 << width):
        if _satisfies(masks, zeta, full):
            return Configuration.full(width, zeta)
    return None


def run_oracle(
    problem: str, formula: CnfFormula, s: Optional[int] = None, caps: Optional[Caps] = None
) -> OracleResult:
    """Dispatch by problem tag: sat, count, alpha, emajsat, qsat2."""
    if problem in ("alpha", "emajsat", "qsat2") and s is None:
        raise ArgumentError(f"{problem} needs s")
    answer: Union[bool, int]
    if problem == "sat":
        answer = sat_brute(formula, caps)
    elif problem == "count":
        answer = count_models(formula, caps)
    elif problem == "alpha":
        answer = alpha_star(formula, s, caps)[0]  # type: ignore[arg-type]
    elif problem == "emajsat":
        answer = emajsat_brute(formula, s, caps)  # type: ignore[arg-type]
    elif problem == "qsat2":
        answer = qsat2_brute(formula, s, caps)  # type: ignore[arg-type]
    else:
        raise ArgumentError(f"unknown oracle problem {problem!r}")
    result = OracleResult(problem=problem, digest=digest(formula), answer=answer, evaluations=1 << formula.n)
    logger.debug(f"oracle {problem} on {result.digest}: {answer}")
    return result
