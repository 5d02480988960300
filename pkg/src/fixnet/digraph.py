"""
Signed interaction digraphs.

A SignedDigraph carries vertices 1..n and at most one signed arc per ordered
pair. This module holds the structural primitives that only look at the
digraph: validity, the per-vertex order, signed cycles, positive feedback
vertex sets and the even-cycle transformation.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, Field

from .config import Caps, resolve_caps
from .configuration import Configuration
from .errors import ArgumentError, PreconditionError, SizeCapError

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


class Sign(int, Enum):
    """Sign of an arc or a cycle."""
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @property
    def tilde(self) -> int:
        """1 for a negative sign, 0 otherwise."""
        return 1 if self is Sign.NEGATIVE else 0

    @property
    def symbol(self) -> str:
        """One-character form used in the text formats."""
        return {Sign.NEGATIVE: "-", Sign.ZERO: "0", Sign.POSITIVE: "+"}[self]

    @classmethod
    def from_symbol(cls, symbol: str) -> "Sign":
        table = {"-": cls.NEGATIVE, "0": cls.ZERO, "+": cls.POSITIVE}
        if symbol not in table:
            raise ArgumentError(f"unknown sign symbol {symbol!r}")
        return table[symbol]

    def __mul__(self, other: object) -> "Sign":
        if not isinstance(other, Sign):
            return NotImplemented
        return Sign(int(self.value) * int(other.value))


def product_sign(signs: Iterable[Sign]) -> Sign:
    result = Sign.POSITIVE
    for s in signs:
        result = result * s
    return result


@dataclass(frozen=True)
class SignedDigraph:
    """Signed digraph on vertices 1..n."""

    n: int
    arcs: Mapping[Arc, Sign] = field(default_factory=dict)
    names: Mapping[int, str] = field(default_factory=dict, compare=False)
    _in: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False)
    _out: Dict[int, Tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ArgumentError(f"vertex count must be non-negative, got {self.n}")
        arcs: Dict[Arc, Sign] = {}
        ins: Dict[int, List[int]] = {v: [] for v in range(1, self.n + 1)}
        outs: Dict[int, List[int]] = {v: [] for v in range(1, self.n + 1)}
        for (j, i), s in self.arcs.items():
            if not (1 <= j <= self.n and 1 <= i <= self.n):
                raise ArgumentError(f"arc ({j},{i}) outside vertex range 1..{self.n}")
            arcs[(j, i)] = Sign(s)
            ins[i].append(j)
            outs[j].append(i)
        object.__setattr__(self, "arcs", dict(sorted(arcs.items())))
        object.__setattr__(self, "_in", {v: tuple(sorted(js)) for v, js in ins.items()})
        object.__setattr__(self, "_out", {v: tuple(sorted(js)) for v, js in outs.items()})

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def name(self, vertex: int) -> str:
        return self.names.get(vertex, str(vertex))

    def sign(self, j: int, i: int) -> Optional[Sign]:
        return self.arcs.get((j, i))

    def in_neighbors(self, i: int) -> Tuple[int, ...]:
        return self._in[i]

    def out_neighbors(self, j: int) -> Tuple[int, ...]:
        return self._out[j]

    def in_neighbors_by_sign(self, i: int, sign: Sign) -> Tuple[int, ...]:
        return tuple(j for j in self._in[i] if self.arcs[(j, i)] is sign)

    def in_degree(self, i: int) -> int:
        return len(self._in[i])

    @property
    def max_in_degree(self) -> int:
        """Δ(D)."""
        return max((len(js) for js in self._in.values()), default=0)

    def sources(self) -> List[int]:
        return [v for v in self.vertices if not self._in[v]]

    def is_nice(self) -> bool:
        return all(s is not Sign.ZERO for s in self.arcs.values())

    def is_full_positive(self) -> bool:
        return all(s is Sign.POSITIVE for s in self.arcs.values())

    def has_loop(self, v: int) -> bool:
        return (v, v) in self.arcs

    def with_changes(
        self,
        add: Optional[Mapping[Arc, Sign]] = None,
        remove: Iterable[Arc] = (),
        extra_vertices: int = 0,
        names: Optional[Mapping[int, str]] = None,
    ) -> "SignedDigraph":
        """New digraph with arcs removed, then added (overwriting), and vertices appended."""
        arcs = dict(self.arcs)
        for arc in remove:
            arcs.pop(arc, None)
        arcs.update(add or {})
        all_names = dict(self.names)
        all_names.update(names or {})
        return SignedDigraph(self.n + extra_vertices, arcs, all_names)

    def to_networkx(self, exclude: Iterable[int] = ()) -> nx.DiGraph:
        """networkx view with a ``sign`` attribute, minus the ``exclude`` vertices."""
        skip = set(exclude)
        g = nx.DiGraph()
        g.add_nodes_from(v for v in self.vertices if v not in skip)
        g.add_edges_from(
            (j, i, {"sign": s}) for (j, i), s in self.arcs.items() if j not in skip and i not in skip
        )
        return g

    def strongly_connected_components(self) -> List[FrozenSet[int]]:
        comps = [frozenset(c) for c in nx.strongly_connected_components(self.to_networkx())]
        return sorted(comps, key=min)

    def is_strongly_connected(self) -> bool:
        return self.n > 0 and nx.is_strongly_connected(self.to_networkx())

    def is_acyclic(self, exclude: Iterable[int] = ()) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx(exclude))

    def topological_order(self, exclude: Iterable[int] = ()) -> List[int]:
        """Vertices outside ``exclude`` in a deterministic topological order."""
        g = self.to_networkx(exclude)
        if not nx.is_directed_acyclic_graph(g):
            raise PreconditionError("digraph minus the excluded vertices has a cycle")
        return list(nx.lexicographical_topological_sort(g))


class ValidityReport(BaseModel):
    """Outcome of the SID validity test."""

    valid: bool
    nice: bool
    violators: List[int] = Field(default_factory=list)


def validate_sid(digraph: SignedDigraph) -> ValidityReport:
    """
    Check whether ``digraph`` is the SID of some Boolean network.

    Valid iff every vertex has a number of zero in-neighbors different from
    one, or has at least three in-neighbors.
    """
    violators = [
        i
        for i in digraph.vertices
        if len(digraph.in_neighbors_by_sign(i, Sign.ZERO)) == 1 and digraph.in_degree(i) < 3
    ]
    if violators:
        logger.debug(f"SID invalid at vertices {violators}")
    return ValidityReport(valid=not violators, nice=digraph.is_nice(), violators=violators)


def leq_config(digraph: SignedDigraph, i: int, x: Configuration, y: Configuration) -> bool:
    """The partial order x ≤ᴰᵢ y on configurations over V_D."""
    for j in digraph.in_neighbors(i):
        xj, yj = x[j], y[j]
        s = digraph.arcs[(j, i)]
        if s is Sign.POSITIVE and xj > yj:
            return False
        if s is Sign.NEGATIVE and yj > xj:
            return False
        if s is Sign.ZERO and xj != yj:
            return False
    return True


@dataclass(frozen=True)
class CycleRecord:
    """Simple directed cycle, minimum vertex first."""

    vertices: Tuple[int, ...]
    sign: Sign

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class SignedCycles:
    """All simple cycles of a digraph with their sign counts."""

    cycles: Tuple[CycleRecord, ...]

    def __iter__(self) -> Iterator[CycleRecord]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def positive(self) -> int:
        """c⁺."""
        return sum(1 for c in self.cycles if c.sign is Sign.POSITIVE)

    @property
    def negative(self) -> int:
        """c⁻."""
        return sum(1 for c in self.cycles if c.sign is Sign.NEGATIVE)

    @property
    def zero(self) -> int:
        return sum(1 for c in self.cycles if c.sign is Sign.ZERO)


def _canonical(cycle: List[int]) -> Tuple[int, ...]:
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def _cycle_sign(digraph: SignedDigraph, cycle: Tuple[int, ...]) -> Sign:
    return product_sign(
        digraph.arcs[(cycle[k], cycle[(k + 1) % len(cycle)])] for k in range(len(cycle))
    )


def _iter_cycles(
    digraph: SignedDigraph, caps: Caps, exclude: Iterable[int] = ()
) -> Iterator[CycleRecord]:
    count = 0
    for raw in nx.simple_cycles(digraph.to_networkx(exclude)):
        count += 1
        if count > caps.cycles:
            raise SizeCapError(f"more than {caps.cycles} simple cycles")
        cycle = _canonical(raw)
        yield CycleRecord(cycle, _cycle_sign(digraph, cycle))


def enumerate_signed_cycles(digraph: SignedDigraph, caps: Optional[Caps] = None) -> SignedCycles:
    """Every simple cycle exactly once, ordered by root vertex, then length, then sequence."""
    caps = resolve_caps(caps)
    records = sorted(
        _iter_cycles(digraph, caps), key=lambda c: (c.vertices[0], len(c.vertices), c.vertices)
    )
    logger.debug(f"enumerated {len(records)} simple cycles on {digraph.n} vertices")
    return SignedCycles(tuple(records))


def has_cycle_with_sign(
    digraph: SignedDigraph,
    signs: FrozenSet[Sign],
    caps: Optional[Caps] = None,
    exclude: Iterable[int] = (),
) -> bool:
    """True as soon as a simple cycle with one of ``signs`` is found."""
    caps = resolve_caps(caps)
    return any(c.sign in signs for c in _iter_cycles(digraph, caps, exclude))


NON_NEGATIVE = frozenset({Sign.POSITIVE, Sign.ZERO})


def is_positive_feedback_set(
    digraph: SignedDigraph, vertices: Iterable[int], caps: Optional[Caps] = None
) -> bool:
    """True if D minus ``vertices`` has only negative cycles (or none)."""
    return not has_cycle_with_sign(digraph, NON_NEGATIVE, caps, exclude=vertices)


def tau_plus(digraph: SignedDigraph, caps: Optional[Caps] = None) -> int:
    """Minimum size of a positive feedback vertex set, by increasing subset search."""
    return len(minimum_positive_feedback_set(digraph, caps))


def minimum_positive_feedback_set(
    digraph: SignedDigraph, caps: Optional[Caps] = None
) -> Tuple[int, ...]:
    caps = resolve_caps(caps)
    if digraph.n > caps.tau_n:
        raise SizeCapError(f"tau_plus needs n <= {caps.tau_n}, got {digraph.n}")
    # only vertices on some cycle can matter
    candidates = sorted(
        v
        for comp in digraph.strongly_connected_components()
        for v in comp
        if len(comp) > 1 or digraph.has_loop(v)
    )
    for size in range(len(candidates) + 1):
        for subset in combinations(candidates, size):
            if is_positive_feedback_set(digraph, subset, caps):
                logger.debug(f"positive feedback vertex set {subset}")
                return subset
    return tuple(candidates)


def even_cycle_transform(digraph: SignedDigraph) -> SignedDigraph:
    """
    Unsigned digraph (all arcs carry the positive sign) whose even simple
    cycles correspond to the positive cycles of ``digraph``.

    Each positive arc (j,i) becomes a path j -> a -> i through a fresh vertex
    a; each negative arc stays a direct arc.
    """
    if not digraph.is_nice():
        raise PreconditionError("even-cycle transformation needs a digraph without zero arcs")
    arcs: Dict[Arc, Sign] = {}
    names = dict(digraph.names)
    fresh = digraph.n
    for (j, i), s in digraph.arcs.items():
        if s is Sign.POSITIVE:
            fresh += 1
            names[fresh] = f"mid[{j},{i}]"
            arcs[(j, fresh)] = Sign.POSITIVE
            arcs[(fresh, i)] = Sign.POSITIVE
        else:
            arcs[(j, i)] = Sign.POSITIVE
    return SignedDigraph(fresh, arcs, names)
