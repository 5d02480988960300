"""
Certificates for "some network of F(D) has at least k fixed points".

A certificate lists k configurations (the claimed fixed points) and, for
every arc, configurations witnessing that the arc can increase and/or
decrease its head. Checking is local: each vertex i only compares the
configurations that must map to 0 (F_i) against those that must map to 1
(T_i) under the order ≤ᴰᵢ.
"""

import logging
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, Field

from .config import Caps, resolve_caps
from .configuration import Configuration
from .digraph import Arc, Sign, SignedDigraph
from .errors import ArgumentError, PreconditionError, SizeCapError, StructureError, WitnessError
from .network import BooleanNetwork, LocalFunction, fixed_points_naive, rows_leq

logger = logging.getLogger(__name__)


class ArcWitness(BaseModel):
    """Configuration attached to arc (source, target); its bit at ``source`` is 0."""

    source: int
    target: int
    config: str


class Certificate(BaseModel):
    """k claimed fixed points plus increase and decrease witnesses per arc."""

    n: int
    fixed_points: List[str] = Field(default_factory=list)
    plus: List[ArcWitness] = Field(default_factory=list)
    minus: List[ArcWitness] = Field(default_factory=list)

    def configurations(self) -> List[Configuration]:
        return [self._decode(text) for text in self.fixed_points]

    def plus_map(self) -> Dict[Arc, Configuration]:
        return {(w.source, w.target): self._decode(w.config) for w in self.plus}

    def minus_map(self) -> Dict[Arc, Configuration]:
        return {(w.source, w.target): self._decode(w.config) for w in self.minus}

    def _decode(self, text: str) -> Configuration:
        if len(text) != self.n:
            raise StructureError(f"configuration {text!r} has length {len(text)}, expected {self.n}")
        try:
            return Configuration.from_string(text)
        except ArgumentError as e:
            raise StructureError(str(e)) from e


def _needs_plus(sign: Sign) -> bool:
    return sign is not Sign.NEGATIVE


def _needs_minus(sign: Sign) -> bool:
    return sign is not Sign.POSITIVE


def _validate_structure(digraph: SignedDigraph, cert: Certificate) -> None:
    if cert.n != digraph.n:
        raise StructureError(f"certificate is over {cert.n} vertices, digraph has {digraph.n}")
    points = cert.configurations()
    if len({p.bits for p in points}) != len(points):
        raise StructureError("certificate repeats a fixed point")
    for label, witnesses, required in (
        ("increase", cert.plus_map(), _needs_plus),
        ("decrease", cert.minus_map(), _needs_minus),
    ):
        expected = {arc for arc, s in digraph.arcs.items() if required(s)}
        if set(witnesses) != expected:
            missing = sorted(expected - set(witnesses))
            extra = sorted(set(witnesses) - expected)
            raise StructureError(f"{label} witnesses mismatch: missing {missing}, unexpected {extra}")
        for (j, i), x in witnesses.items():
            if x[j] != 0:
                raise StructureError(f"{label} witness of arc ({j},{i}) has bit {j} set")


def _split(
    digraph: SignedDigraph, cert: Certificate, i: int
) -> Tuple[List[Configuration], List[Configuration]]:
    """(F_i, T_i)."""
    false_set: List[Configuration] = []
    true_set: List[Configuration] = []
    for x in cert.configurations():
        (true_set if x[i] else false_set).append(x)
    plus, minus = cert.plus_map(), cert.minus_map()
    for j in digraph.in_neighbors(i):
        if (j, i) in plus:
            false_set.append(plus[(j, i)])
            true_set.append(plus[(j, i)].flip(j))
        if (j, i) in minus:
            false_set.append(minus[(j, i)].flip(j))
            true_set.append(minus[(j, i)])
    return false_set, true_set


def _row(digraph: SignedDigraph, i: int, x: Configuration) -> int:
    idx = 0
    for k, j in enumerate(digraph.in_neighbors(i)):
        idx |= x[j] << k
    return idx


def _signs(digraph: SignedDigraph, i: int) -> List[Sign]:
    return [digraph.arcs[(j, i)] for j in digraph.in_neighbors(i)]


def _vertex_consistent(signs: List[Sign], false_rows: List[int], true_rows: List[int]) -> bool:
    return not any(rows_leq(signs, y, x) for y in true_rows for x in false_rows)


def certificate_check(digraph: SignedDigraph, k: int, cert: Certificate) -> bool:
    """Accept iff no vertex i has y in T_i and x in F_i with y ≤ᴰᵢ x."""
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")
    if k > 1 << digraph.n:
        return False
    _validate_structure(digraph, cert)
    if len(cert.fixed_points) != k:
        raise StructureError(f"certificate lists {len(cert.fixed_points)} configurations, expected {k}")
    for i in digraph.vertices:
        false_set, true_set = _split(digraph, cert, i)
        signs = _signs(digraph, i)
        if not _vertex_consistent(
            signs, [_row(digraph, i, x) for x in false_set], [_row(digraph, i, y) for y in true_set]
        ):
            logger.debug(f"certificate rejected at vertex {i}")
            return False
    return True


def certificate_to_bn(digraph: SignedDigraph, cert: Certificate) -> BooleanNetwork:
    """f_i(x) = 1 iff some y in T_i satisfies y ≤ᴰᵢ x."""
    if not certificate_check(digraph, len(cert.fixed_points), cert):
        raise PreconditionError("certificate is rejected")
    functions: Dict[int, LocalFunction] = {}
    for i in digraph.vertices:
        _, true_set = _split(digraph, cert, i)
        signs = _signs(digraph, i)
        true_rows = {_row(digraph, i, y) for y in true_set}
        table = 0
        for idx in range(1 << len(signs)):
            if any(rows_leq(signs, y, idx) for y in true_rows):
                table |= 1 << idx
        functions[i] = LocalFunction(digraph.in_neighbors(i), table)
    return BooleanNetwork.from_mapping(digraph.n, functions, digraph.names)


def _search_vertex(
    digraph: SignedDigraph, i: int, points: List[Configuration]
) -> Optional[Tuple[Dict[Arc, int], Dict[Arc, int]]]:
    """Backtracking over witness rows for the arcs entering i."""
    signs = _signs(digraph, i)
    inputs = digraph.in_neighbors(i)
    false_rows = [_row(digraph, i, x) for x in points if not x[i]]
    true_rows = [_row(digraph, i, x) for x in points if x[i]]
    if not _vertex_consistent(signs, false_rows, true_rows):
        return None
    slots: List[Tuple[str, int]] = []
    for k, j in enumerate(inputs):
        if _needs_plus(signs[k]):
            slots.append(("plus", k))
        if _needs_minus(signs[k]):
            slots.append(("minus", k))
    chosen: List[int] = []

    def extend(pos: int, fs: List[int], ts: List[int]) -> bool:
        if pos == len(slots):
            return True
        kind, k = slots[pos]
        bit = 1 << k
        for row in range(1 << len(inputs)):
            if row & bit:
                continue
            low, high = (row, row | bit) if kind == "plus" else (row | bit, row)
            new_f, new_t = fs + [low], ts + [high]
            if not any(rows_leq(signs, high, x) for x in new_f):
                if not any(rows_leq(signs, y, low) for y in new_t):
                    chosen.append(row)
                    if extend(pos + 1, new_f, new_t):
                        return True
                    chosen.pop()
        return False

    if not extend(0, false_rows, true_rows):
        return None
    plus: Dict[Arc, int] = {}
    minus: Dict[Arc, int] = {}
    for (kind, k), row in zip(slots, chosen):
        (plus if kind == "plus" else minus)[(inputs[k], i)] = row
    return plus, minus


def _iter_point_tuples(n: int, k: int) -> Iterator[List[Configuration]]:
    for combo in combinations(range(1 << n), k):
        yield [Configuration.full(n, bits) for bits in combo]


def certificate_search(
    digraph: SignedDigraph, k: int, caps: Optional[Caps] = None
) -> Optional[Certificate]:
    """First accepted certificate in lexicographic order, or None when φmax(D) < k."""
    caps = resolve_caps(caps)
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")
    if digraph.n > caps.cert_n:
        raise SizeCapError(f"certificate search needs n <= {caps.cert_n}, got {digraph.n}")
    if k > 1 << digraph.n:
        return None
    for points in _iter_point_tuples(digraph.n, k):
        plus: Dict[Arc, Configuration] = {}
        minus: Dict[Arc, Configuration] = {}
        for i in digraph.vertices:
            found = _search_vertex(digraph, i, points)
            if found is None:
                break
            plus.update({arc: _row_config(digraph.n, digraph.in_neighbors(i), row) for arc, row in found[0].items()})
            minus.update({arc: _row_config(digraph.n, digraph.in_neighbors(i), row) for arc, row in found[1].items()})
        else:
            cert = _assemble(digraph.n, points, plus, minus)
            logger.info(f"certificate found with fixed points {cert.fixed_points}")
            return cert
    return None


def _assemble(
    n: int,
    points: List[Configuration],
    plus: Dict[Arc, Configuration],
    minus: Dict[Arc, Configuration],
) -> Certificate:
    return Certificate(
        n=n,
        fixed_points=[str(p) for p in points],
        plus=[ArcWitness(source=j, target=i, config=str(x)) for (j, i), x in sorted(plus.items())],
        minus=[ArcWitness(source=j, target=i, config=str(x)) for (j, i), x in sorted(minus.items())],
    )


def harvest_certificate(digraph: SignedDigraph, network: BooleanNetwork, k: int) -> Certificate:
    """Certificate read off a concrete network with at least k fixed points."""
    points = fixed_points_naive(network)[:k]
    if len(points) < k:
        raise WitnessError(f"network has {len(points)} fixed points, fewer than {k}")
    plus: Dict[Arc, Configuration] = {}
    minus: Dict[Arc, Configuration] = {}
    for (j, i), s in digraph.arcs.items():
        fn = network.local(i)
        if j not in fn.inputs:
            raise WitnessError(f"network does not read arc ({j},{i})")
        k_bit = 1 << fn.inputs.index(j)
        for idx in range(1 << fn.arity):
            if idx & k_bit:
                continue
            lo, hi = fn.output(idx), fn.output(idx | k_bit)
            x = _row_config(digraph.n, fn.inputs, idx)
            if _needs_plus(s) and hi > lo and (j, i) not in plus:
                plus[(j, i)] = x
            if _needs_minus(s) and hi < lo and (j, i) not in minus:
                minus[(j, i)] = x
    return _assemble(digraph.n, points, plus, minus)


def _row_config(n: int, inputs: Tuple[int, ...], idx: int) -> Configuration:
    bits = 0
    for k, j in enumerate(inputs):
        if (idx >> k) & 1:
            bits |= 1 << (j - 1)
    return Configuration.full(n, bits)
