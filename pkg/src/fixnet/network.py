"""
Boolean networks with explicit truth tables.

States are packed integers over vertices 1..n (bit i-1 holds x_i); the
Configuration type is used at the API boundary.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .config import Caps, resolve_caps
from .configuration import Configuration
from .digraph import Arc, Sign, SignedDigraph
from .errors import ArgumentError, SizeCapError, StructureError

logger = logging.getLogger(__name__)


class LocalKind(str, Enum):
    """Shape of a local function."""
    CONST0 = "const0"
    CONST1 = "const1"
    COPY = "copy"
    AND = "and"
    OR = "or"
    OTHER = "other"


@dataclass(frozen=True)
class LocalFunction:
    """
    Truth table over a sorted in-neighborhood.

    Row ``idx`` of ``table`` is the output for the input where bit ``k`` of
    ``idx`` is the value of ``inputs[k]``; the smallest in-neighbor is the
    least significant bit.
    """

    inputs: Tuple[int, ...]
    table: int

    def __post_init__(self) -> None:
        if list(self.inputs) != sorted(set(self.inputs)):
            raise StructureError(f"in-neighborhood {self.inputs} must be sorted and distinct")
        if self.table < 0 or self.table >> (1 << len(self.inputs)):
            raise StructureError(f"truth table {self.table:#x} too wide for {len(self.inputs)} inputs")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def row(self, state: int) -> int:
        idx = 0
        for k, j in enumerate(self.inputs):
            idx |= ((state >> (j - 1)) & 1) << k
        return idx

    def evaluate(self, state: int) -> int:
        return (self.table >> self.row(state)) & 1

    def output(self, idx: int) -> int:
        return (self.table >> idx) & 1

    @classmethod
    def constant(cls, value: int) -> "LocalFunction":
        return cls((), 1 if value else 0)

    @classmethod
    def from_callable(
        cls, inputs: Sequence[int], rule: Callable[[Tuple[int, ...]], int]
    ) -> "LocalFunction":
        """Tabulate ``rule`` over input tuples given in the order of sorted ``inputs``."""
        ordered = tuple(sorted(inputs))
        table = 0
        for idx in range(1 << len(ordered)):
            bits = tuple((idx >> k) & 1 for k in range(len(ordered)))
            if rule(bits):
                table |= 1 << idx
        return cls(ordered, table)

    @classmethod
    def conjunction(cls, literals: Mapping[int, int]) -> "LocalFunction":
        """AND of x_j xor flip_j over ``literals`` (vertex -> flip bit)."""
        inputs = tuple(sorted(literals))
        flips = tuple(literals[j] for j in inputs)
        return cls.from_callable(inputs, lambda b: all(v ^ f for v, f in zip(b, flips)))

    @classmethod
    def disjunction(cls, literals: Mapping[int, int]) -> "LocalFunction":
        inputs = tuple(sorted(literals))
        flips = tuple(literals[j] for j in inputs)
        return cls.from_callable(inputs, lambda b: any(v ^ f for v, f in zip(b, flips)))

    def local_signs(self) -> Dict[int, Sign]:
        """Sign of every effective input; ineffective inputs are omitted."""
        signs: Dict[int, Sign] = {}
        size = 1 << self.arity
        for k, j in enumerate(self.inputs):
            bit = 1 << k
            up = down = False
            for idx in range(size):
                if idx & bit:
                    continue
                lo, hi = self.output(idx), self.output(idx | bit)
                if hi > lo:
                    up = True
                elif hi < lo:
                    down = True
                if up and down:
                    break
            if up and down:
                signs[j] = Sign.ZERO
            elif up:
                signs[j] = Sign.POSITIVE
            elif down:
                signs[j] = Sign.NEGATIVE
        return signs


@dataclass(frozen=True)
class BooleanNetwork:
    """Boolean network f on vertices 1..n."""

    n: int
    functions: Tuple[LocalFunction, ...]
    names: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if len(self.functions) != self.n:
            raise StructureError(f"expected {self.n} local functions, got {len(self.functions)}")
        deg_cap = resolve_caps(None).deg
        for i, fn in enumerate(self.functions, start=1):
            if fn.arity > deg_cap:
                raise SizeCapError(f"vertex {i} has {fn.arity} inputs, cap is {deg_cap}")
            if fn.inputs and not (1 <= fn.inputs[0] and fn.inputs[-1] <= self.n):
                raise StructureError(f"vertex {i} reads a vertex outside 1..{self.n}")

    @classmethod
    def from_mapping(
        cls, n: int, functions: Mapping[int, LocalFunction], names: Optional[Mapping[int, str]] = None
    ) -> "BooleanNetwork":
        missing = [i for i in range(1, n + 1) if i not in functions]
        if missing:
            raise StructureError(f"no local function for vertices {missing}")
        return cls(n, tuple(functions[i] for i in range(1, n + 1)), dict(names or {}))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def local(self, i: int) -> LocalFunction:
        return self.functions[i - 1]

    def replace(self, changes: Mapping[int, LocalFunction]) -> "BooleanNetwork":
        functions = list(self.functions)
        for i, fn in changes.items():
            functions[i - 1] = fn
        return BooleanNetwork(self.n, tuple(functions), self.names)

    def step(self, state: int) -> int:
        """f(x) on a packed state."""
        out = 0
        for k, fn in enumerate(self.functions):
            if fn.evaluate(state):
                out |= 1 << k
        return out

    def __call__(self, x: Configuration) -> Configuration:
        if x.domain != tuple(self.vertices):
            raise ArgumentError("network evaluation needs a configuration over 1..n")
        return Configuration(x.domain, self.step(x.bits))

    def is_fixed(self, state: int) -> bool:
        for k, fn in enumerate(self.functions):
            if fn.evaluate(state) != (state >> k) & 1:
                return False
        return True

    def fixed_point_states(self) -> Iterator[int]:
        for state in range(1 << self.n):
            if self.is_fixed(state):
                yield state


def sid_of(network: BooleanNetwork) -> SignedDigraph:
    """The signed interaction digraph D_f, scanning each local truth table."""
    arcs: Dict[Arc, Sign] = {}
    for i, fn in enumerate(network.functions, start=1):
        for j, s in fn.local_signs().items():
            arcs[(j, i)] = s
    return SignedDigraph(network.n, arcs, dict(network.names))


def fixed_points_naive(network: BooleanNetwork, caps: Optional[Caps] = None) -> List[Configuration]:
    """All fixed points of ``network`` by scanning the 2ⁿ configurations."""
    caps = resolve_caps(caps)
    if network.n > caps.naive_n:
        raise SizeCapError(f"naive fixed-point scan needs n <= {caps.naive_n}, got {network.n}")
    return [Configuration.full(network.n, s) for s in network.fixed_point_states()]


def classify_local(network: BooleanNetwork, i: int) -> LocalKind:
    """Classify f_i as a constant, COPY, AND, OR or something else."""
    fn = network.local(i)
    signs = fn.local_signs()
    if not signs:
        return LocalKind.CONST1 if fn.output(0) else LocalKind.CONST0
    if any(s is Sign.ZERO for s in signs.values()):
        return LocalKind.OTHER
    if len(signs) == 1:
        return LocalKind.COPY
    flips = {j: s.tilde for j, s in signs.items()}
    effective = [k for k, j in enumerate(fn.inputs) if j in signs]

    def literals(idx: int) -> List[int]:
        return [((idx >> k) & 1) ^ flips[fn.inputs[k]] for k in effective]

    rows = range(1 << fn.arity)
    if all(fn.output(idx) == int(all(literals(idx))) for idx in rows):
        return LocalKind.AND
    if all(fn.output(idx) == int(any(literals(idx))) for idx in rows):
        return LocalKind.OR
    return LocalKind.OTHER


def and_function(digraph: SignedDigraph, i: int) -> LocalFunction:
    """⋀ x_j xor σ̃_ji over the in-neighbors of i (constant 1 for a source)."""
    return LocalFunction.conjunction({j: digraph.arcs[(j, i)].tilde for j in digraph.in_neighbors(i)})


def or_function(digraph: SignedDigraph, i: int) -> LocalFunction:
    """⋁ x_j xor σ̃_ji over the in-neighbors of i (constant 0 for a source)."""
    return LocalFunction.disjunction({j: digraph.arcs[(j, i)].tilde for j in digraph.in_neighbors(i)})


def rows_leq(signs: Sequence[Sign], r: int, s: int) -> bool:
    """≤ᴰᵢ restricted to the in-neighborhood: rows ``r`` and ``s`` of a truth table."""
    for k, sign in enumerate(signs):
        a, b = (r >> k) & 1, (s >> k) & 1
        if sign is Sign.POSITIVE and a > b:
            return False
        if sign is Sign.NEGATIVE and b > a:
            return False
        if sign is Sign.ZERO and a != b:
            return False
    return True
