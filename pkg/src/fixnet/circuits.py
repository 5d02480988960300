"""
Circuits as Boolean networks.

A circuit structure is a signed digraph that becomes acyclic once the
positive loops of its input vertices are removed. A circuit is a network on
such a structure; it has exactly one fixed point per input configuration.

Circuit files::

    circuit <n>
    input <v>
    const <v> 0|1
    id <v> <j> +|-
    and <v> <j> <k>
    or <v> <j> <k>
    role U <ids...>
    role P <id> <id>
    role W <ids...>
    role rho <id>
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .cnf import CnfFormula
from .configuration import Configuration
from .digraph import Sign, SignedDigraph
from .errors import FormatError, PreconditionError, StructureError
from .network import BooleanNetwork, LocalFunction, LocalKind, classify_local, sid_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CircuitStructure:
    """Signed digraph with designated input vertices (positive loop, nothing else)."""

    digraph: SignedDigraph
    inputs: Tuple[int, ...]

    def __post_init__(self) -> None:
        for v in self.inputs:
            if self.digraph.in_neighbors(v) != (v,) or self.digraph.arcs[(v, v)] is not Sign.POSITIVE:
                raise StructureError(f"input {self.digraph.name(v)} must carry only a positive loop")
        if not self.digraph.is_acyclic(exclude=self.inputs):
            raise StructureError("circuit structure is cyclic outside its inputs")

    @property
    def outputs(self) -> List[int]:
        return [v for v in self.digraph.vertices if not self.digraph.out_neighbors(v)]

    @property
    def gates(self) -> List[int]:
        return self.digraph.topological_order(exclude=self.inputs)

    def is_basic(self) -> bool:
        if self.digraph.max_in_degree > 2:
            return False
        for i in self.digraph.vertices:
            if self.digraph.in_degree(i) == 2 and any(
                self.digraph.arcs[(j, i)] is not Sign.POSITIVE for j in self.digraph.in_neighbors(i)
            ):
                return False
        return True


@dataclass(frozen=True)
class Circuit:
    """A network h on a circuit structure."""

    structure: CircuitStructure
    network: BooleanNetwork
    names: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if sid_of(self.network) != self.structure.digraph:
            raise StructureError("network does not realise the circuit structure")

    @property
    def n(self) -> int:
        return self.network.n

    def gate_label(self, v: int) -> str:
        """const0/const1, id+/id-, and, or, or input."""
        if v in self.structure.inputs:
            return "input"
        kind = classify_local(self.network, v)
        if kind is LocalKind.COPY:
            (j,) = self.structure.digraph.in_neighbors(v)
            return "id" + self.structure.digraph.arcs[(j, v)].symbol
        return kind.value

    def evaluate(self, input_state: int) -> int:
        """Packed fixed point extending the input bits set in ``input_state``."""
        state = 0
        for v in self.structure.inputs:
            state |= input_state & (1 << (v - 1))
        for v in self.structure.gates:
            if self.network.local(v).evaluate(state):
                state |= 1 << (v - 1)
        return state


def circuit_eval(circuit: Circuit, z: Configuration) -> Configuration:
    """The unique fixed point of h extending the input configuration z."""
    if set(z.domain) != set(circuit.structure.inputs):
        raise PreconditionError("z must assign exactly the input vertices")
    return Configuration.full(circuit.n, circuit.evaluate(z.state(circuit.n)))


def omega_of(circuit: Circuit) -> CnfFormula:
    """CNF over V_C satisfied exactly by the fixed points of h (inputs are unconstrained)."""
    if not circuit.structure.is_basic():
        raise PreconditionError("ω needs a basic circuit structure")
    clauses: List[Tuple[int, ...]] = []
    digraph = circuit.structure.digraph
    for i in circuit.structure.gates:
        label = circuit.gate_label(i)
        preds = digraph.in_neighbors(i)
        if label == "const1":
            clauses.append((i,))
        elif label == "const0":
            clauses.append((-i,))
        elif label == "id+":
            (j,) = preds
            clauses += [(i, -j), (-i, j)]
        elif label == "id-":
            (j,) = preds
            clauses += [(i, j), (-i, -j)]
        elif label == "and":
            j, k = preds
            clauses += [(-i, j), (-i, k), (i, -j, -k)]
        elif label == "or":
            j, k = preds
            clauses += [(i, -j), (i, -k), (-i, j, k)]
        else:
            raise PreconditionError(f"gate {digraph.name(i)} is {label}, not a basic gate")
    return CnfFormula.of(circuit.n, clauses)


def build_circuit(
    n: int,
    inputs: List[int],
    gates: Mapping[int, LocalFunction],
    names: Optional[Mapping[int, str]] = None,
) -> Circuit:
    """Assemble a circuit from gate functions; inputs become positive loops."""
    functions: Dict[int, LocalFunction] = dict(gates)
    for v in inputs:
        functions[v] = LocalFunction((v,), 0b10)
    network = BooleanNetwork.from_mapping(n, functions, names)
    structure = CircuitStructure(sid_of(network), tuple(sorted(inputs)))
    return Circuit(structure, network, dict(names or {}))


def gate(kind: str, *args: int) -> LocalFunction:
    """Local function for one circuit-file gate line."""
    if kind == "const":
        (value,) = args
        return LocalFunction.constant(value)
    if kind == "id":
        j, negated = args
        return LocalFunction.conjunction({j: negated})
    if kind == "and":
        j, k = args
        return LocalFunction.conjunction({j: 0, k: 0})
    if kind == "or":
        j, k = args
        return LocalFunction.disjunction({j: 0, k: 0})
    raise FormatError(f"unknown gate {kind!r}")


def parse_circuit(text: str) -> Tuple[Circuit, Dict[str, List[int]]]:
    """Read a circuit file; returns the circuit and its role lines."""
    n: Optional[int] = None
    inputs: List[int] = []
    gates: Dict[int, LocalFunction] = {}
    roles: Dict[str, List[int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if n is None:
            if head != "circuit" or len(parts) != 2:
                raise FormatError("expected 'circuit <n>'", number)
            n = _number(parts[1], number)
            continue
        if head == "role":
            if len(parts) < 3 or parts[1] not in ("U", "P", "W", "rho"):
                raise FormatError("role lines read 'role U|P|W|rho <ids>'", number)
            roles[parts[1]] = [_number(tok, number) for tok in parts[2:]]
            continue
        try:
            if head == "input" and len(parts) == 2:
                inputs.append(_number(parts[1], number))
                continue
            v = _number(parts[1], number)
            if v in gates:
                raise FormatError(f"vertex {v} defined twice", number)
            if head == "const" and len(parts) == 3 and parts[2] in ("0", "1"):
                gates[v] = gate("const", int(parts[2]))
            elif head == "id" and len(parts) == 4 and parts[3] in ("+", "-"):
                gates[v] = gate("id", _number(parts[2], number), int(parts[3] == "-"))
            elif head in ("and", "or") and len(parts) == 4:
                gates[v] = gate(head, _number(parts[2], number), _number(parts[3], number))
            else:
                raise FormatError(f"cannot read gate line {line!r}", number)
        except IndexError as e:
            raise FormatError(f"truncated line {line!r}", number) from e
    if n is None:
        raise FormatError("missing 'circuit <n>' header")
    try:
        circuit = build_circuit(n, inputs, gates)
    except StructureError as e:
        raise FormatError(str(e)) from e
    return circuit, roles


def _number(token: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError as e:
        raise FormatError(f"expected an integer, got {token!r}", line) from e
    if value < 1:
        raise FormatError(f"vertex ids start at 1, got {value}", line)
    return value


def format_circuit(circuit: Circuit, roles: Optional[Mapping[str, List[int]]] = None) -> str:
    digraph = circuit.structure.digraph
    lines = [f"circuit {circuit.n}"]
    for v in digraph.vertices:
        label = circuit.gate_label(v)
        preds = digraph.in_neighbors(v)
        if label == "input":
            lines.append(f"input {v}")
        elif label in ("const0", "const1"):
            lines.append(f"const {v} {label[-1]}")
        elif label in ("id+", "id-"):
            lines.append(f"id {v} {preds[0]} {label[-1]}")
        elif label in ("and", "or"):
            lines.append(f"{label} {v} {preds[0]} {preds[1]}")
        else:
            raise StructureError(f"gate {v} cannot be written in the circuit format")
    for name, ids in (roles or {}).items():
        lines.append(f"role {name} " + " ".join(str(i) for i in ids))
    return "\n".join(lines) + "\n"
