"""
Named desk-scale instances shared by the tests, the CLI and the bundled suite.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional

from .circuits import build_circuit, gate
from .cnf import CnfFormula
from .digraph import Sign, SignedDigraph
from .errors import ArgumentError
from .network import BooleanNetwork, LocalFunction
from .succinct import SuccinctRepresentation

P, N, Z = Sign.POSITIVE, Sign.NEGATIVE, Sign.ZERO


@dataclass(frozen=True)
class Instance:
    """One named input; identities read the fields they need."""

    name: str
    description: str
    digraph: Optional[SignedDigraph] = None
    network: Optional[BooleanNetwork] = None
    formula: Optional[CnfFormula] = None
    s: Optional[int] = None
    k: Optional[int] = None
    succinct: Optional[SuccinctRepresentation] = None


def three_cycle_sid() -> SignedDigraph:
    """Three vertices with a negative loop on 1 and positive loop on 3; φmax=1, φmin=0."""
    arcs = {(1, 1): N, (1, 2): P, (2, 3): P, (3, 1): N, (3, 2): P, (3, 3): P}
    return SignedDigraph(3, arcs)


def three_cycle_network() -> BooleanNetwork:
    """(¬x1 ∧ ¬x3, x1 ∨ x3, x2 ∧ x3), whose only fixed point is 011."""
    return BooleanNetwork.from_mapping(
        3,
        {
            1: LocalFunction.conjunction({1: 1, 3: 1}),
            2: LocalFunction.disjunction({1: 0, 3: 0}),
            3: LocalFunction.conjunction({2: 0, 3: 0}),
        },
    )


def zero_arc_sid() -> SignedDigraph:
    """Nice apart from the zero arc 1 -> 2; it has no network with a fixed point."""
    arcs = {(1, 1): P, (2, 2): N, (1, 2): Z, (2, 3): P, (3, 1): P, (3, 2): N}
    return SignedDigraph(3, arcs)


def negative_loop_sid() -> SignedDigraph:
    return SignedDigraph(1, {(1, 1): N})


def positive_loop_sid() -> SignedDigraph:
    return SignedDigraph(1, {(1, 1): P})


def fan_in_four_sid() -> SignedDigraph:
    """Vertex 5 reads the four looped vertices 1..4 positively."""
    arcs = {(v, v): P for v in range(1, 5)}
    arcs.update({(v, 5): P for v in range(1, 5)})
    return SignedDigraph(5, arcs)


def two_clause_formula() -> CnfFormula:
    """(λ1 ∨ ¬λ2 ∨ ¬λ3) ∧ (¬λ1 ∨ ¬λ3), satisfied by 000."""
    return CnfFormula.of(3, [[1, -2, -3], [-1, -3]])


def micro_circuit() -> SuccinctRepresentation:
    """
    Eight-vertex circuit with U={u1}, P={p1,p2}, W={w1,w2} and output ρ.

    It encodes Ψ = (Λ01 ∨ ¬Λ10 ∨ ¬Λ11) ∧ (¬Λ01 ∨ ¬Λ11).
    """
    names = {1: "u1", 2: "p1", 3: "p2", 4: "v1", 5: "v2", 6: "w1", 7: "w2", 8: "rho"}
    gates = {
        4: gate("id", 1, 1),
        5: gate("id", 2, 1),
        6: gate("id", 2, 0),
        7: gate("or", 1, 3),
        8: gate("and", 4, 5),
    }
    circuit = build_circuit(8, [1, 2, 3], gates, names)
    return SuccinctRepresentation(circuit, U=(1,), P=(2, 3), W=(6, 7), rho=8)


def _formula(name: str, description: str, n: int, clauses: List[List[int]], s: int = 1) -> Instance:
    return Instance(name, description, formula=CnfFormula.of(n, clauses), s=s)


_FACTORIES: Dict[str, Callable[[], Instance]] = {
    "three-cycle": lambda: Instance(
        "three-cycle", "three-vertex SID with mixed loops", digraph=three_cycle_sid(),
        network=three_cycle_network(), k=3,
    ),
    "zero-arc": lambda: Instance("zero-arc", "SID whose only zero arc kills every fixed point", digraph=zero_arc_sid()),
    "negative-loop": lambda: Instance("negative-loop", "single negative loop", digraph=negative_loop_sid(), k=2),
    "positive-loop": lambda: Instance("positive-loop", "single positive loop", digraph=positive_loop_sid(), k=8),
    "fan-in-four": lambda: Instance("fan-in-four", "one vertex with four positive in-neighbors", digraph=fan_in_four_sid(), k=4),
    "two-clause": lambda: Instance(
        "two-clause", "three-variable formula with two clauses", formula=two_clause_formula(), s=1
    ),
    "unit-clause": lambda: _formula("unit-clause", "ψ = (λ1)", 1, [[1]]),
    "contradiction": lambda: _formula("contradiction", "ψ = (λ1) ∧ (¬λ1)", 1, [[1], [-1]]),
    "xor-pair": lambda: _formula("xor-pair", "ψ = (λ1 ∨ λ2) ∧ (¬λ1 ∨ ¬λ2)", 2, [[1, 2], [-1, -2]]),
    "forall-pair": lambda: _formula("forall-pair", "ψ = (λ1 ∨ λ2) ∧ (λ1 ∨ ¬λ2)", 2, [[1, 2], [1, -2]]),
    "tautology": lambda: _formula("tautology", "ψ = (λ1 ∨ λ2 ∨ ¬λ2), one clause of width three", 2, [[1, 2, -2]]),
    "micro-circuit": lambda: Instance("micro-circuit", "succinct two-clause formula over four variables", succinct=micro_circuit()),
}

INSTANCE_NAMES = tuple(_FACTORIES)


@lru_cache(maxsize=None)
def get_instance(name: str) -> Instance:
    try:
        factory = _FACTORIES[name]
    except KeyError as e:
        raise ArgumentError(f"unknown instance {name!r}; choose from {', '.join(INSTANCE_NAMES)}") from e
    return factory()
