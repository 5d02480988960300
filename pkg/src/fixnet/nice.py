"""
Deciding whether some network in F(D) has a fixed point.

The decision runs in polynomial time apart from the positive-cycle test,
which is done by cycle enumeration with early exit.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx

from .config import Caps, resolve_caps
from .configuration import Configuration
from .digraph import Arc, Sign, SignedDigraph, enumerate_signed_cycles, has_cycle_with_sign, validate_sid
from .errors import PreconditionError, ValidityError, WitnessError
from .network import BooleanNetwork, LocalFunction, and_function, or_function, sid_of

logger = logging.getLogger(__name__)

POSITIVE_ONLY = frozenset({Sign.POSITIVE})


def _require_valid(digraph: SignedDigraph) -> None:
    report = validate_sid(digraph)
    if not report.valid:
        raise ValidityError(f"not a valid SID, violators {report.violators}")


def nicefy(digraph: SignedDigraph) -> SignedDigraph:
    """
    Remove zero arcs while preserving whether φmax is positive.

    A vertex with two or more zero in-neighbors loses all its in-arcs; a
    vertex with a single zero in-neighbor loses just that arc.
    """
    _require_valid(digraph)
    doomed: List[Arc] = []
    for i in digraph.vertices:
        zeros = digraph.in_neighbors_by_sign(i, Sign.ZERO)
        if len(zeros) >= 2:
            doomed.extend((j, i) for j in digraph.in_neighbors(i))
        elif len(zeros) == 1:
            doomed.append((zeros[0], i))
    if doomed:
        logger.debug(f"nicefy removes {len(doomed)} arcs")
    return digraph.with_changes(remove=doomed)


def has_positive_cycle(digraph: SignedDigraph, caps: Optional[Caps] = None) -> bool:
    """Whether a nice SID has a positive cycle."""
    if not digraph.is_nice():
        raise PreconditionError("positive-cycle test expects a digraph without zero arcs")
    return has_cycle_with_sign(digraph, POSITIVE_ONLY, caps)


def _literal(digraph: SignedDigraph, j: int, i: int, y: Configuration) -> int:
    return y[j] ^ digraph.arcs[(j, i)].tilde


def _nice_local(digraph: SignedDigraph, i: int, y: Configuration) -> LocalFunction:
    """f'_i on a nice digraph with f'_i(y) = y_i: constant, AND or OR."""
    if not digraph.in_neighbors(i):
        return LocalFunction.constant(y[i])
    literals = {_literal(digraph, j, i, y) for j in digraph.in_neighbors(i)}
    if y[i] not in literals:
        raise WitnessError(f"no local function at vertex {i} fixes y_{i}={y[i]}")
    return and_function(digraph, i) if y[i] == 0 else or_function(digraph, i)


def lift_fixed_point(digraph: SignedDigraph, y: Configuration) -> BooleanNetwork:
    """
    A network f in F(D) with f(y) = y, built from the nicefied digraph.

    Vertices without zero in-neighbors take the AND/OR choice of the nice
    digraph. A vertex with one zero in-neighbor k guards each non-zero
    literal by x_k; a vertex with several zero in-neighbors gates the
    non-zero literals with the parity of the zero in-neighbors against y.
    """
    _require_valid(digraph)
    if y.domain != tuple(digraph.vertices):
        raise PreconditionError("y must be a configuration over all vertices")
    functions: Dict[int, LocalFunction] = {}
    for i in digraph.vertices:
        zeros = digraph.in_neighbors_by_sign(i, Sign.ZERO)
        others = [j for j in digraph.in_neighbors(i) if j not in zeros]
        yi = y[i]
        if not zeros:
            functions[i] = _nice_local(digraph, i, y)
        elif len(zeros) == 1:
            functions[i] = _single_zero_local(digraph, i, zeros[0], others, y)
        else:
            functions[i] = _many_zero_local(digraph, i, zeros, others, y)
        if functions[i].evaluate(y.bits) != yi:
            raise WitnessError(f"constructed f_{i} does not fix y_{i}")
    network = BooleanNetwork.from_mapping(digraph.n, functions, digraph.names)
    if sid_of(network) != digraph:
        raise WitnessError("lifted network does not realise the digraph")
    return network


def _single_zero_local(
    digraph: SignedDigraph, i: int, k: int, others: List[int], y: Configuration
) -> LocalFunction:
    yi, yk = y[i], y[k]
    anchors = [j for j in others if _literal(digraph, j, i, y) == yi]
    if not anchors:
        raise WitnessError(f"no non-zero in-neighbor of {i} agrees with y_{i}={yi}")
    anchor = anchors[0]
    inputs = tuple(sorted(digraph.in_neighbors(i)))
    pos = {j: p for p, j in enumerate(inputs)}
    tilde = {j: digraph.arcs[(j, i)].tilde for j in others}

    def rule(bits: Tuple[int, ...]) -> int:
        xk = bits[pos[k]]
        lit = {j: bits[pos[j]] ^ tilde[j] for j in others}
        if yi == 0:
            head = lit[anchor] | (xk ^ yk)
            tail = all(lit[j] | (xk ^ yk ^ 1) for j in others if j != anchor)
            return int(head and tail)
        head = lit[anchor] & (xk ^ yk ^ 1)
        tail = any(lit[j] & (xk ^ yk) for j in others if j != anchor)
        return int(head or tail)

    return LocalFunction.from_callable(inputs, rule)


def _many_zero_local(
    digraph: SignedDigraph, i: int, zeros: Tuple[int, ...], others: List[int], y: Configuration
) -> LocalFunction:
    yi = y[i]
    inputs = tuple(sorted(digraph.in_neighbors(i)))
    pos = {j: p for p, j in enumerate(inputs)}
    tilde = {j: digraph.arcs[(j, i)].tilde for j in others}

    def rule(bits: Tuple[int, ...]) -> int:
        parity = 0
        for j in zeros:
            parity ^= bits[pos[j]] ^ y[j]
        if yi == 0:
            return int(parity == 1 and all(bits[pos[j]] ^ tilde[j] for j in others))
        return int(parity == 0 or any(bits[pos[j]] ^ tilde[j] for j in others))

    return LocalFunction.from_callable(inputs, rule)


def initial_components(digraph: SignedDigraph) -> List[frozenset[int]]:
    """Strongly connected components with no arc entering from outside."""
    graph = digraph.to_networkx()
    condensed = nx.condensation(graph)
    initial = [
        frozenset(condensed.nodes[c]["members"]) for c in condensed.nodes if condensed.in_degree(c) == 0
    ]
    return sorted(initial, key=min)


def _is_trivial(digraph: SignedDigraph, component: frozenset[int]) -> bool:
    return len(component) == 1 and not digraph.has_loop(next(iter(component)))


@dataclass(frozen=True)
class MaxDecision:
    """Outcome of the φmax >= 1 decision."""

    answer: bool
    nice: SignedDigraph
    fixed_point: Optional[Configuration] = None
    witness: Optional[BooleanNetwork] = None


def decide_max_ge1(
    digraph: SignedDigraph, caps: Optional[Caps] = None, synthesize: bool = False
) -> MaxDecision:
    """
    Decide φmax(D) >= 1.

    True iff every non-trivial initial strongly connected component of the
    nicefied digraph contains a positive cycle. With ``synthesize`` a network
    of F(D) and one of its fixed points are returned on a positive answer.
    """
    caps = resolve_caps(caps)
    nice = nicefy(digraph)
    chosen: List[Tuple[int, ...]] = []
    for component in initial_components(nice):
        if _is_trivial(nice, component):
            continue
        cycle = _positive_cycle_in(nice, component, caps)
        if cycle is None:
            logger.info(f"initial component {sorted(component)} has no positive cycle")
            return MaxDecision(False, nice)
        chosen.append(cycle)
    if not synthesize:
        return MaxDecision(True, nice)
    y = _seed_fixed_point(nice, chosen)
    witness = lift_fixed_point(digraph, y)
    return MaxDecision(True, nice, y, witness)


def _positive_cycle_in(
    digraph: SignedDigraph, component: frozenset[int], caps: Caps
) -> Optional[Tuple[int, ...]]:
    outside = [v for v in digraph.vertices if v not in component]
    sub = digraph.with_changes(remove=[a for a in digraph.arcs if a[0] in outside or a[1] in outside])
    for cycle in enumerate_signed_cycles(sub, caps):
        if cycle.sign is Sign.POSITIVE:
            return cycle.vertices
    return None


def _seed_fixed_point(digraph: SignedDigraph, cycles: List[Tuple[int, ...]]) -> Configuration:
    """
    A configuration fixed by some AND/OR network on the nice digraph.

    Every vertex gets one parent: cycle vertices their cycle predecessor,
    other vertices the vertex that reached them first in a breadth-first
    search from the sources and the chosen positive cycles. Values then
    propagate along parents; positive cycles keep them consistent.
    """
    value: Dict[int, int] = {}
    queue: deque[int] = deque()
    for v in digraph.sources():
        value[v] = 0
        queue.append(v)
    for cycle in cycles:
        value[cycle[0]] = 0
        for prev, v in zip(cycle, cycle[1:]):
            value[v] = value[prev] ^ digraph.arcs[(prev, v)].tilde
        queue.extend(cycle)
    while queue:
        j = queue.popleft()
        for i in digraph.out_neighbors(j):
            if i not in value:
                value[i] = value[j] ^ digraph.arcs[(j, i)].tilde
                queue.append(i)
    if len(value) != digraph.n:
        raise WitnessError("some vertices are unreachable from sources and positive cycles")
    return Configuration.from_mapping(value)
