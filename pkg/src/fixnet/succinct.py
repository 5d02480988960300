"""
Succinctly represented 3-CNF formulas and the D_Ψ pipeline.

A circuit with inputs U and P = {p1, p2} and outputs W and ρ describes a
formula Ψ over the 2^|W| variables Λ_w: clause M_u is the disjunction of
the literals M_{u,p} for p in {01, 10, 11}, where M_{u,p} is Λ_w when the
circuit maps (u, p) to (w, ρ=1) and ¬Λ_w when ρ=0.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from .analysis import FvsCounter
from .circuits import Circuit, CircuitStructure, omega_of
from .cnf import CnfFormula
from .config import Caps, resolve_caps
from .configuration import Configuration
from .digraph import Arc, Sign, SignedDigraph
from .errors import NamingError, SizeCapError, StructureError
from .gadgets import Gadget, Variant, build_d_psi, canonical_bn
from .network import BooleanNetwork, LocalFunction

logger = logging.getLogger(__name__)

POSITIONS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 0), (1, 1))
RESERVED_NAMES = ("s1", "s2", "nu")


@dataclass(frozen=True)
class SuccinctRepresentation:
    """Circuit plus the role sets U, P, W and the output ρ."""

    circuit: Circuit
    U: Tuple[int, ...]
    P: Tuple[int, int]
    W: Tuple[int, ...]
    rho: int

    def __post_init__(self) -> None:
        groups = [set(self.U), set(self.P), set(self.W), {self.rho}]
        if sum(len(g) for g in groups) != len(set().union(*groups)):
            raise StructureError("U, P, W and rho must be pairwise disjoint")
        if set(self.circuit.structure.inputs) != set(self.U) | set(self.P):
            raise StructureError("circuit inputs must be exactly U and P")
        outputs = set(self.circuit.structure.outputs)
        if not (set(self.W) | {self.rho}) <= outputs:
            raise StructureError("W and rho must be output vertices")

    @classmethod
    def from_roles(cls, circuit: Circuit, roles: Dict[str, List[int]]) -> "SuccinctRepresentation":
        try:
            p1, p2 = roles["P"]
            (rho,) = roles["rho"]
            return cls(circuit, tuple(roles["U"]), (p1, p2), tuple(roles["W"]), rho)
        except (KeyError, ValueError) as e:
            raise StructureError(f"incomplete succinct roles: {e}") from e

    @property
    def n(self) -> int:
        """Number of W bits; Ψ has 2^n variables."""
        return len(self.W)

    @property
    def m(self) -> int:
        """Number of U bits; Ψ has 2^m clauses."""
        return len(self.U)

    @property
    def size(self) -> int:
        """|V_C|."""
        return self.circuit.n

    def lambda_var(self, w_bits: Tuple[int, ...]) -> int:
        """DIMACS id of Λ_w, reading w (w_1 first) as a binary number plus one."""
        value = 0
        for b in w_bits:
            value = (value << 1) | b
        return value + 1

    def lambda_name(self, var: int) -> str:
        return "L" + format(var - 1, f"0{self.n}b") if self.n else "L"

    def literal(self, u_bits: Tuple[int, ...], position: Tuple[int, int]) -> int:
        """M_{u,p} as a signed DIMACS literal over Λ."""
        state = 0
        for v, b in zip(self.U, u_bits):
            state |= b << (v - 1)
        for v, b in zip(self.P, position):
            state |= b << (v - 1)
        x = self.circuit.evaluate(state)
        w_bits = tuple((x >> (v - 1)) & 1 for v in self.W)
        var = self.lambda_var(w_bits)
        return var if (x >> (self.rho - 1)) & 1 else -var

    def clause_table(self) -> Dict[Tuple[int, ...], Tuple[int, int, int]]:
        table = {}
        for u in product((0, 1), repeat=self.m):
            first, second, third = (self.literal(u, p) for p in POSITIONS)
            table[u] = (first, second, third)
        return table


class ExpandedFormula(NamedTuple):
    triples: List[Tuple[int, int, int]]
    formula: CnfFormula


def expand_succinct(rep: SuccinctRepresentation, caps: Optional[Caps] = None) -> ExpandedFormula:
    """The explicit Ψ: one clause per u in {0,1}^U, literals in position order 01, 10, 11."""
    caps = resolve_caps(caps)
    if rep.n > caps.expand or rep.m > caps.expand:
        raise SizeCapError(f"expansion needs |W|,|U| <= {caps.expand}, got {rep.n}, {rep.m}")
    table = rep.clause_table()
    triples = [table[u] for u in product((0, 1), repeat=rep.m)]
    names = {var: rep.lambda_name(var) for var in range(1, (1 << rep.n) + 1)}
    formula = CnfFormula((1 << rep.n), tuple(triples), names)
    logger.info(f"expanded succinct formula to {formula.m} clauses over {formula.n} variables")
    return ExpandedFormula(triples, formula)


class CPrimeRoles(NamedTuple):
    s1: int
    s2: int
    nu: int


def c_prime_roles(rep: SuccinctRepresentation) -> CPrimeRoles:
    clash = [name for name in rep.circuit.names.values() if name in RESERVED_NAMES]
    if clash:
        raise NamingError(f"circuit already uses reserved names {clash}")
    n = rep.size
    return CPrimeRoles(n + 1, n + 2, n + 3)


def build_c_prime(rep: SuccinctRepresentation) -> CircuitStructure:
    """C with the P loops removed and the zero-signed selectors s1, s2, ν added."""
    roles = c_prime_roles(rep)
    base = rep.circuit.structure.digraph
    guards = list(rep.U) + [roles.s1, roles.s2]
    add: Dict[Arc, Sign] = {}
    for p in rep.P:
        for j in guards:
            add[(j, p)] = Sign.ZERO
    for j in list(rep.W) + [roles.s1, roles.s2]:
        add[(j, roles.nu)] = Sign.ZERO
    names = {roles.s1: "s1", roles.s2: "s2", roles.nu: "nu"}
    digraph = base.with_changes(
        add=add, remove=[(p, p) for p in rep.P], extra_vertices=3, names=names
    )
    return CircuitStructure(digraph, tuple(sorted(rep.U)))


def psi_of(rep: SuccinctRepresentation) -> CnfFormula:
    """ω plus (p1 ∨ p2), (ρ ∨ ¬ν), (¬ρ ∨ ν); ν is variable |V_C|+1."""
    omega = omega_of(rep.circuit)
    nu = rep.size + 1
    p1, p2 = rep.P
    extra = [(p1, p2), (rep.rho, -nu), (-rep.rho, nu)]
    names = {v: rep.circuit.names.get(v, f"x{v}") for v in range(1, rep.size + 1)}
    names[nu] = "nu"
    return CnfFormula(nu, omega.clauses + tuple(extra), names)


def build_d_Psi(rep: SuccinctRepresentation, variant: Variant = Variant.MAX) -> Gadget:
    """C' and D_ψ glued on λ = V_C ∪ {ν}; gadget vertices follow C'."""
    c_prime = build_c_prime(rep).digraph
    roles = c_prime_roles(rep)
    psi = psi_of(rep)
    gadget, layout = build_d_psi(psi, variant)
    lam_count = psi.n
    mapping: Dict[int, int] = {}
    for v in gadget.vertices:
        if v <= lam_count:
            mapping[v] = v if v <= rep.size else roles.nu
        else:
            mapping[v] = c_prime.n + (v - lam_count)
    arcs: Dict[Arc, Sign] = dict(c_prime.arcs)
    for (j, i), s in gadget.arcs.items():
        arcs[(mapping[j], mapping[i])] = s
    names = dict(c_prime.names)
    for v, name in gadget.names.items():
        if v > lam_count:
            names[mapping[v]] = name
    total = c_prime.n + gadget.n - lam_count
    glued = SignedDigraph(total, arcs, names)
    glued_layout = layout.remap(mapping).with_roles(
        {"s1": roles.s1, "s2": roles.s2, "nu": roles.nu}
    )
    logger.info(f"built D_Psi ({variant.value}) with {total} vertices from |V_C|={rep.size}")
    return Gadget(glued, glued_layout)


def _xor_state(state: int, vertices: List[int]) -> int:
    value = 0
    for v in vertices:
        value ^= (state >> (v - 1)) & 1
    return value


def assignment_to_circuit(rep: SuccinctRepresentation, zeta: Configuration) -> BooleanNetwork:
    """
    A consistent h' in F(C') whose fixed points realise ζ.

    With both selectors s1, s2 at 0, p1 p2 point at the first clause
    position whose literal ζ satisfies (11 when none does) and ν reads ζ at
    x_W. Otherwise the three vertices output the parity of their in-neighbors,
    which makes every selector arc zero-signed.
    """
    roles = c_prime_roles(rep)
    table = rep.clause_table()
    values = zeta.as_dict()

    def satisfied(lit: int) -> bool:
        return bool(values.get(abs(lit), 0)) == (lit > 0)

    functions: Dict[int, LocalFunction] = {
        v: rep.circuit.network.local(v) for v in range(1, rep.size + 1)
    }
    functions[roles.s1] = LocalFunction.constant(0)
    functions[roles.s2] = LocalFunction.constant(0)
    guards = sorted(list(rep.U) + [roles.s1, roles.s2])
    selector_states = [roles.s1, roles.s2]

    def select(which: int) -> Callable[[Tuple[int, ...]], int]:
        def rule(bits: Tuple[int, ...]) -> int:
            state = sum(b << (v - 1) for v, b in zip(guards, bits))
            if any((state >> (v - 1)) & 1 for v in selector_states):
                return _xor_state(state, guards)
            u = tuple((state >> (v - 1)) & 1 for v in rep.U)
            first, second, _ = table[u]
            if which == 0:
                return 0 if satisfied(first) else 1
            return 0 if satisfied(second) and not satisfied(first) else 1

        return rule

    p1, p2 = rep.P
    functions[p1] = LocalFunction.from_callable(guards, select(0))
    functions[p2] = LocalFunction.from_callable(guards, select(1))

    nu_inputs = sorted(list(rep.W) + [roles.s1, roles.s2])

    def nu_rule(bits: Tuple[int, ...]) -> int:
        state = sum(b << (v - 1) for v, b in zip(nu_inputs, bits))
        if any((state >> (v - 1)) & 1 for v in selector_states):
            return _xor_state(state, nu_inputs)
        w_bits = tuple((state >> (v - 1)) & 1 for v in rep.W)
        return values.get(rep.lambda_var(w_bits), 0)

    functions[roles.nu] = LocalFunction.from_callable(nu_inputs, nu_rule)
    names = dict(rep.circuit.names)
    names.update({roles.s1: "s1", roles.s2: "s2", roles.nu: "nu"})
    return BooleanNetwork.from_mapping(rep.size + 3, functions, names)


def epsilon_fixed_points(
    rep: SuccinctRepresentation, network: BooleanNetwork, epsilon: Configuration
) -> List[int]:
    """Packed x with x xor ε a fixed point of h'; one per input configuration of U."""
    structure = build_c_prime(rep)
    counter = FvsCounter(structure.digraph, rep.U)
    eps = epsilon.state(network.n)
    return sorted(state ^ eps for state in counter.states(network))


def is_consistent(
    rep: SuccinctRepresentation, network: BooleanNetwork, epsilon: Optional[Configuration] = None
) -> bool:
    """Every ε-fixed point extends a fixed point of h and has x_P != 00."""
    eps = epsilon if epsilon is not None else Configuration.full(network.n)
    h = rep.circuit.network
    mask = (1 << rep.size) - 1
    for x in epsilon_fixed_points(rep, network, eps):
        if not h.is_fixed(x & mask):
            return False
        if not any((x >> (p - 1)) & 1 for p in rep.P):
            return False
    return True


def extract_assignment(
    rep: SuccinctRepresentation, network: BooleanNetwork, epsilon: Optional[Configuration] = None
) -> Configuration:
    """ζ with ζ at Λ_{x_W} equal to x_ν for every ε-fixed point x; other variables 0."""
    roles = c_prime_roles(rep)
    eps = epsilon if epsilon is not None else Configuration.full(network.n)
    zeta: Dict[int, int] = {var: 0 for var in range(1, (1 << rep.n) + 1)}
    seen: Dict[int, int] = {}
    for x in epsilon_fixed_points(rep, network, eps):
        var = rep.lambda_var(tuple((x >> (v - 1)) & 1 for v in rep.W))
        value = (x >> (roles.nu - 1)) & 1
        assert seen.get(var, value) == value, f"conflicting values for {rep.lambda_name(var)}"
        seen[var] = value
        zeta[var] = value
    return Configuration.from_mapping(zeta)


def canonical_psi_network(
    rep: SuccinctRepresentation, zeta: Configuration, variant: Variant = Variant.MAX
) -> Tuple[Gadget, BooleanNetwork]:
    """D_Ψ with h' from ζ on C', AND on the ℓ vertices and OR on the rest of the gadget."""
    gadget = build_d_Psi(rep, variant)
    h_prime = assignment_to_circuit(rep, zeta)
    others = {v: h_prime.local(v) for v in h_prime.vertices}
    network = canonical_bn(gadget.digraph, gadget.layout, Configuration((), 0), others)
    return gadget, network


def psi_feedback_set(rep: SuccinctRepresentation, gadget: Gadget) -> List[int]:
    """U ∪ {ℓ_0}, a positive feedback vertex set of size m+1."""
    return sorted(list(rep.U) + [gadget.layout.ell(0)])
