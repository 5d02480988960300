"""
Gadget compiler: CNF formulas to signed digraphs.

D_ψ encodes ψ over n variables and m clauses on 4n+2m+1 vertices. The
source layer λ carries the assignment, the literal vertices λ± and the
chain ℓ_0..ℓ_n route it to the clause vertices μ_s, and the clause chain
c_m..c_1 closes every cycle through ℓ_0. The min variant turns (c_1, ℓ_0)
negative. Further passes add free loops, reduce in-degrees to two, make the
digraph strongly connected or pad it with isolated positive loops.
"""

import logging
from enum import Enum
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple

from pydantic import BaseModel, Field

from .config import Caps, resolve_caps
from .configuration import Configuration
from .cnf import CnfFormula
from .digraph import Arc, Sign, SignedDigraph
from .errors import ArgumentError, LayoutError, PreconditionError, SizeCapError, StructureError
from .network import BooleanNetwork, LocalFunction, LocalKind, and_function, classify_local, or_function

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    """Which extreme a gadget targets."""
    MAX = "max"
    MIN = "min"


class GadgetLayout(BaseModel):
    """Role names of gadget vertices, plus the arcs that touch U_ψ."""

    n: int
    m: int
    roles: Dict[str, int] = Field(default_factory=dict)
    core_arcs: List[Tuple[int, int, int]] = Field(default_factory=list, exclude=True)

    def __getitem__(self, role: str) -> int:
        try:
            return self.roles[role]
        except KeyError as e:
            raise LayoutError(f"layout has no role {role!r}") from e

    def lam(self, r: int) -> int:
        return self[f"lambda{r}"]

    def lam_pos(self, r: int) -> int:
        return self[f"lambda{r}+"]

    def lam_neg(self, r: int) -> int:
        return self[f"lambda{r}-"]

    def literal(self, lit: int) -> int:
        return self.lam_pos(lit) if lit > 0 else self.lam_neg(-lit)

    def ell(self, r: int) -> int:
        return self[f"ell{r}"]

    def mu(self, s: int) -> int:
        return self[f"mu{s}"]

    def c(self, s: int) -> int:
        """c_s, with c_{m+1} standing for ℓ_n."""
        return self.ell(self.n) if s == self.m + 1 else self[f"c{s}"]

    def sources(self) -> List[int]:
        return [self.lam(r) for r in range(1, self.n + 1)]

    def ells(self) -> Set[int]:
        return {self.ell(r) for r in range(self.n + 1)}

    def u_psi(self) -> Set[int]:
        """Gadget vertices outside the source layer."""
        vertices = self.ells()
        for r in range(1, self.n + 1):
            vertices |= {self.lam_pos(r), self.lam_neg(r)}
        for s in range(1, self.m + 1):
            vertices |= {self.mu(s), self[f"c{s}"]}
        return vertices

    def with_roles(self, extra: Mapping[str, int]) -> "GadgetLayout":
        clash = set(extra) & set(self.roles)
        if clash:
            raise LayoutError(f"roles already assigned: {sorted(clash)}")
        return self.model_copy(update={"roles": {**self.roles, **extra}})

    def remap(self, mapping: Mapping[int, int]) -> "GadgetLayout":
        """Rename vertices through ``mapping`` (used when gluing gadgets)."""
        return GadgetLayout(
            n=self.n,
            m=self.m,
            roles={name: mapping[v] for name, v in self.roles.items()},
            core_arcs=[(mapping[j], mapping[i], s) for j, i, s in self.core_arcs],
        )


class Gadget(NamedTuple):
    digraph: SignedDigraph
    layout: GadgetLayout


def _ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


def build_d_psi(formula: CnfFormula, variant: Variant = Variant.MAX) -> Gadget:
    """D_ψ (or D_ψ⁻ for the min variant) with vertices λ, λ±, ℓ, μ, c in that order."""
    n, m = formula.n, formula.m
    if m == 0:
        raise ArgumentError("gadget needs at least one clause")
    if n == 0:
        raise ArgumentError("gadget needs at least one variable")
    roles: Dict[str, int] = {}
    for r in range(1, n + 1):
        roles[f"lambda{r}"] = r
        roles[f"lambda{r}+"] = n + 2 * r - 1
        roles[f"lambda{r}-"] = n + 2 * r
    for r in range(n + 1):
        roles[f"ell{r}"] = 3 * n + 1 + r
    for s in range(1, m + 1):
        roles[f"mu{s}"] = 4 * n + 1 + s
        roles[f"c{s}"] = 4 * n + 1 + m + s
    layout = GadgetLayout(n=n, m=m, roles=roles)

    arcs: Dict[Arc, Sign] = {}
    for r in range(1, n + 1):
        arcs[(layout.lam(r), layout.lam_pos(r))] = Sign.POSITIVE
        arcs[(layout.ell(r - 1), layout.lam_pos(r))] = Sign.POSITIVE
        arcs[(layout.lam(r), layout.lam_neg(r))] = Sign.NEGATIVE
        arcs[(layout.ell(r - 1), layout.lam_neg(r))] = Sign.POSITIVE
        arcs[(layout.lam_pos(r), layout.ell(r))] = Sign.POSITIVE
        arcs[(layout.lam_neg(r), layout.ell(r))] = Sign.POSITIVE
    closing = Sign.POSITIVE if variant is Variant.MAX else Sign.NEGATIVE
    arcs[(layout.c(1), layout.ell(0))] = closing
    for s, clause in enumerate(formula.clauses, start=1):
        for lit in clause:
            arcs[(layout.literal(lit), layout.mu(s))] = Sign.POSITIVE
        arcs[(layout.mu(s), layout.c(s))] = Sign.NEGATIVE
        arcs[(layout.c(s + 1), layout.c(s))] = Sign.POSITIVE

    names = {v: name for name, v in roles.items()}
    digraph = SignedDigraph(4 * n + 2 * m + 1, arcs, names)
    layout.core_arcs = [(j, i, int(s)) for (j, i), s in digraph.arcs.items()]
    logger.info(f"built D_psi ({variant.value}) with {digraph.n} vertices, {len(arcs)} arcs")
    return Gadget(digraph, layout)


def build_d_psi_neg(formula: CnfFormula) -> Gadget:
    return build_d_psi(formula, Variant.MIN)


def add_free_loops(formula: CnfFormula, s: int, variant: Variant = Variant.MAX) -> Gadget:
    """D_{ψ,s}: the gadget with positive loops on λ_{s+1}..λ_n."""
    if not 1 <= s <= formula.n:
        raise ArgumentError(f"s must lie in 1..{formula.n}, got {s}")
    digraph, layout = build_d_psi(formula, variant)
    loops = {(layout.lam(r), layout.lam(r)): Sign.POSITIVE for r in range(s + 1, formula.n + 1)}
    return Gadget(digraph.with_changes(add=loops), layout)


def is_extension(digraph: SignedDigraph, layout: GadgetLayout) -> bool:
    """True when the arcs touching U_ψ are exactly those of the gadget."""
    u_psi = layout.u_psi()
    touching = {
        (j, i, int(s)) for (j, i), s in digraph.arcs.items() if j in u_psi or i in u_psi
    }
    return touching == set(layout.core_arcs)


def canonical_bn(
    digraph: SignedDigraph,
    layout: GadgetLayout,
    source_values: Configuration,
    others: Optional[Mapping[int, LocalFunction]] = None,
) -> BooleanNetwork:
    """
    Sources constant, loop-only vertices COPY, ℓ vertices AND, the rest of U_ψ OR.

    Vertices outside U_ψ that are neither sources nor loop-only must be
    supplied through ``others``.
    """
    if not is_extension(digraph, layout):
        raise StructureError("digraph is not an extension of the gadget")
    assigned = source_values.as_dict()
    ells = layout.ells()
    u_psi = layout.u_psi()
    functions: Dict[int, LocalFunction] = dict(others or {})
    for i in digraph.vertices:
        if i in functions:
            continue
        preds = digraph.in_neighbors(i)
        if i in u_psi:
            functions[i] = and_function(digraph, i) if i in ells else or_function(digraph, i)
        elif not preds:
            if i not in assigned:
                raise ArgumentError(f"no value supplied for source {digraph.name(i)}")
            functions[i] = LocalFunction.constant(assigned[i])
        elif preds == (i,) and digraph.arcs[(i, i)] is Sign.POSITIVE:
            functions[i] = LocalFunction((i,), 0b10)
        else:
            raise ArgumentError(f"no local function supplied for vertex {digraph.name(i)}")
    return BooleanNetwork.from_mapping(digraph.n, functions, digraph.names)


def epsilon_of(layout: GadgetLayout, network: BooleanNetwork) -> Configuration:
    """ε(f) over λ: 0 where f_{ℓ_r} is OR, 1 where it is AND."""
    bits: Dict[int, int] = {}
    for r in range(1, layout.n + 1):
        kind = classify_local(network, layout.ell(r))
        if kind is LocalKind.AND:
            bits[layout.lam(r)] = 1
        elif kind is LocalKind.OR:
            bits[layout.lam(r)] = 0
        else:
            raise StructureError(f"f at ell{r} is {kind.value}, expected AND or OR")
    return Configuration.from_mapping(bits)


def non_gadget_vertices(digraph: SignedDigraph, layout: GadgetLayout) -> List[int]:
    u_psi = layout.u_psi()
    return [v for v in digraph.vertices if v not in u_psi]


def partial_fixed_points(
    digraph: SignedDigraph, layout: GadgetLayout, network: BooleanNetwork, caps: Optional[Caps] = None
) -> List[Configuration]:
    """Configurations z on I = V minus U_ψ with f(x)_I = z; f_I only reads I."""
    caps = resolve_caps(caps)
    if not is_extension(digraph, layout):
        raise StructureError("digraph is not an extension of the gadget")
    rest = non_gadget_vertices(digraph, layout)
    if len(rest) > caps.naive_n:
        raise SizeCapError(f"{len(rest)} non-gadget vertices exceed {caps.naive_n}")
    found = []
    for z in Configuration.all_over(rest):
        state = z.state(digraph.n)
        if all(network.local(v).evaluate(state) == z[v] for v in rest):
            found.append(z)
    return found


def extending_fixed_points(
    digraph: SignedDigraph, layout: GadgetLayout, network: BooleanNetwork, z: Configuration
) -> List[int]:
    """Packed fixed points x of f with x_I = z; U_ψ minus ℓ_0 is evaluated in topological order."""
    ell0 = layout.ell(0)
    fixed = set(z.domain) | {ell0}
    order = digraph.topological_order(exclude=fixed)
    base = z.state(digraph.n)
    found = []
    for b in (0, 1):
        state = base | (b << (ell0 - 1))
        for v in order:
            if network.local(v).evaluate(state):
                state |= 1 << (v - 1)
        if network.is_fixed(state):
            found.append(state)
    return found


class DegreeReduction(NamedTuple):
    digraph: SignedDigraph
    chains: Dict[str, int]


def degree_reduce(digraph: SignedDigraph) -> DegreeReduction:
    """
    Split every in-degree k >= 3 vertex into a positive chain.

    For in-neighbors j_1 < ... < j_k of i, the arcs j_l -> i (l < k) are
    replaced by j_1 -> j'_2 -> ... -> j'_{k-1} -> i with an extra arc
    j_l -> j'_l into each new chain vertex.
    """
    heavy = [i for i in digraph.vertices if digraph.in_degree(i) >= 3]
    for i in heavy:
        bad = [j for j in digraph.in_neighbors(i) if digraph.arcs[(j, i)] is not Sign.POSITIVE]
        if bad:
            raise PreconditionError(
                f"vertex {digraph.name(i)} has in-degree {digraph.in_degree(i)} with non-positive in-neighbors {bad}"
            )
    fresh = digraph.n
    remove: List[Arc] = []
    add: Dict[Arc, Sign] = {}
    names: Dict[int, str] = {}
    chains: Dict[str, int] = {}
    for i in heavy:
        preds = digraph.in_neighbors(i)
        k = len(preds)
        remove.extend((j, i) for j in preds[:-1])
        links = [preds[0]]
        for pos in range(2, k):
            fresh += 1
            role = f"chain{i}_{pos}"
            names[fresh] = role
            chains[role] = fresh
            add[(preds[pos - 1], fresh)] = Sign.POSITIVE
            links.append(fresh)
        links.append(i)
        for a, b in zip(links, links[1:]):
            add[(a, b)] = Sign.POSITIVE
    reduced = digraph.with_changes(add=add, remove=remove, extra_vertices=fresh - digraph.n, names=names)
    logger.info(f"degree reduction added {fresh - digraph.n} chain vertices")
    return DegreeReduction(reduced, chains)


def strongly_connect(digraph: SignedDigraph, layout: GadgetLayout) -> Gadget:
    """Add u, v fed by ℓ_0 (positively and negatively) and feeding every λ_r."""
    ell0 = layout.ell(0)
    lams = layout.sources()
    u, v = digraph.n + 1, digraph.n + 2
    add: Dict[Arc, Sign] = {(ell0, u): Sign.POSITIVE, (ell0, v): Sign.NEGATIVE}
    for lam in lams:
        add[(u, lam)] = Sign.POSITIVE
        add[(v, lam)] = Sign.POSITIVE
    connected = digraph.with_changes(add=add, extra_vertices=2, names={u: "u", v: "v"})
    return Gadget(connected, layout.with_roles({"u": u, "v": v}))


def pad_max(digraph: SignedDigraph, k: int) -> SignedDigraph:
    """Add ⌈log₂k⌉-1 isolated positive loops, so φmax(D') >= k iff φmax(D) >= 2."""
    if k < 3:
        raise ArgumentError(f"pad_max needs k >= 3, got {k}")
    return _pad(digraph, _ceil_log2(k) - 1)


def pad_min(digraph: SignedDigraph, k: int) -> SignedDigraph:
    """Add ⌈log₂k⌉ isolated positive loops, so φmin(D') < k iff φmin(D) = 0."""
    if k < 2:
        raise ArgumentError(f"pad_min needs k >= 2, got {k}")
    return _pad(digraph, _ceil_log2(k))


def _pad(digraph: SignedDigraph, count: int) -> SignedDigraph:
    first = digraph.n + 1
    loops = {(v, v): Sign.POSITIVE for v in range(first, first + count)}
    names = {v: f"pad{v - digraph.n}" for v in range(first, first + count)}
    return digraph.with_changes(add=loops, extra_vertices=count, names=names)


def padding_roles(digraph: SignedDigraph) -> Dict[str, int]:
    return {name: v for v, name in digraph.names.items() if name.startswith("pad")}
