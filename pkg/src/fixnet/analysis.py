"""
Exact fixed-point analysis over F(D).

Enumerates every Boolean network whose SID is exactly D, counts fixed points
(naively or through a feedback vertex set) and reports the extremes.
"""

import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .config import Caps, resolve_caps
from .digraph import (
    Sign,
    SignedDigraph,
    enumerate_signed_cycles,
    tau_plus,
    validate_sid,
)
from .errors import PreconditionError, SizeCapError, ValidityError
from .formats import format_bn
from .network import BooleanNetwork, LocalFunction, rows_leq, sid_of

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 1 << 20

# audit(digraph, network, position) runs on every network enumerated
Audit = Callable[[SignedDigraph, BooleanNetwork, int], None]

_default_audit: Optional[Audit] = None


def set_enumeration_audit(audit: Optional[Audit]) -> None:
    """Install the hook run on every enumerated network when the caller passes none."""
    global _default_audit
    _default_audit = audit


@lru_cache(maxsize=None)
def _tables_for_signs(signs: Tuple[Sign, ...]) -> Tuple[int, ...]:
    width = 1 << len(signs)
    inputs = tuple(range(1, len(signs) + 1))
    target = dict(zip(inputs, signs))
    matches = []
    for table in range(1 << width):
        if LocalFunction(inputs, table).local_signs() == target:
            matches.append(table)
    return tuple(matches)


def enumerate_local_functions(
    digraph: SignedDigraph, i: int, caps: Optional[Caps] = None
) -> List[LocalFunction]:
    """F_i(D): every local function on N(i) with exactly the prescribed signs, by table value."""
    caps = resolve_caps(caps)
    inputs = digraph.in_neighbors(i)
    if len(inputs) > caps.enum_deg:
        raise SizeCapError(f"vertex {i} has in-degree {len(inputs)}, enumeration cap is {caps.enum_deg}")
    signs = tuple(digraph.arcs[(j, i)] for j in inputs)
    return [LocalFunction(inputs, t) for t in _tables_for_signs(signs)]


@dataclass(frozen=True)
class EnumerationPlan:
    """Admissible local functions per vertex; networks are indexed in mixed radix."""

    digraph: SignedDigraph
    choices: Tuple[Tuple[LocalFunction, ...], ...]

    @classmethod
    def build(cls, digraph: SignedDigraph, caps: Optional[Caps] = None) -> "EnumerationPlan":
        choices = tuple(tuple(enumerate_local_functions(digraph, i, caps)) for i in digraph.vertices)
        return cls(digraph, choices)

    @property
    def size(self) -> int:
        total = 1
        for options in self.choices:
            total *= len(options)
        return total

    def network(self, indices: Sequence[int]) -> BooleanNetwork:
        return BooleanNetwork(
            self.digraph.n,
            tuple(options[k] for options, k in zip(self.choices, indices)),
            self.digraph.names,
        )

    def indices_at(self, position: int) -> Tuple[int, ...]:
        """Choice indices of the network at ``position`` (vertex 1 most significant)."""
        digits = []
        for options in reversed(self.choices):
            position, digit = divmod(position, len(options))
            digits.append(digit)
        return tuple(reversed(digits))

    def iter_range(self, start: int = 0, stop: Optional[int] = None) -> Iterator[BooleanNetwork]:
        """Networks at positions start..stop-1; disjoint ranges cover disjoint networks."""
        stop = self.size if stop is None else min(stop, self.size)
        for position in range(start, stop):
            yield self.network(self.indices_at(position))

    def __iter__(self) -> Iterator[BooleanNetwork]:
        for indices in product(*(range(len(options)) for options in self.choices)):
            yield self.network(indices)


def enumerate_networks(
    digraph: SignedDigraph, caps: Optional[Caps] = None, audit: Optional[Audit] = None
) -> Iterator[BooleanNetwork]:
    """Every f in F(D) exactly once, in lexicographic order of choice indices."""
    caps = resolve_caps(caps)
    plan = EnumerationPlan.build(digraph, caps)
    if plan.size > caps.family:
        raise SizeCapError(f"|F(D)| = {plan.size} exceeds family cap {caps.family}")
    logger.info(f"enumerating {plan.size} networks on {digraph.n} vertices")
    hook = audit if audit is not None else _default_audit
    for count, network in enumerate(plan, start=1):
        if hook is not None:
            hook(digraph, network, count - 1)
        if count % PROGRESS_EVERY == 0:
            logger.info(f"enumerated {count}/{plan.size} networks")
        yield network


def order_properties_hold(digraph: SignedDigraph, network: BooleanNetwork) -> bool:
    """
    Local monotonicity facts every f in F(D) satisfies.

    f_i is non-decreasing for the order ≤ᴰᵢ, and when i has an in-neighbor
    and at most one zero in-neighbor, f_i(x) always equals x_j xor σ̃_ji for
    some non-zero in-neighbor j.
    """
    for i in digraph.vertices:
        fn = network.local(i)
        signs = [digraph.arcs[(j, i)] for j in fn.inputs]
        rows = range(1 << fn.arity)
        for r in rows:
            for s in rows:
                if fn.output(r) > fn.output(s) and rows_leq(signs, r, s):
                    return False
        zeros = sum(1 for s in signs if s is Sign.ZERO)
        if fn.arity and zeros <= 1:
            for r in rows:
                out = fn.output(r)
                if not any(
                    sign is not Sign.ZERO and ((r >> k) & 1) ^ sign.tilde == out
                    for k, sign in enumerate(signs)
                ):
                    return False
    return True


class FvsCounter:
    """Fixed-point counter driven by a feedback vertex set I of the SID."""

    def __init__(self, digraph: SignedDigraph, fvs: Iterable[int]):
        self.fvs = tuple(sorted(set(fvs)))
        try:
            self.order = digraph.topological_order(exclude=self.fvs)
        except PreconditionError as e:
            raise PreconditionError(f"D minus {list(self.fvs)} is not acyclic") from e

    def states(self, network: BooleanNetwork) -> Iterator[int]:
        functions = network.functions
        for assignment in range(1 << len(self.fvs)):
            state = 0
            for k, v in enumerate(self.fvs):
                if (assignment >> k) & 1:
                    state |= 1 << (v - 1)
            for v in self.order:
                if functions[v - 1].evaluate(state):
                    state |= 1 << (v - 1)
            if all(functions[v - 1].evaluate(state) == (state >> (v - 1)) & 1 for v in self.fvs):
                yield state

    def count(self, network: BooleanNetwork) -> int:
        return sum(1 for _ in self.states(network))


def count_fixed_points_fvs(network: BooleanNetwork, fvs: Iterable[int]) -> int:
    """φ(f) by iterating the assignments of I and evaluating the rest in topological order."""
    return FvsCounter(sid_of(network), fvs).count(network)


def greedy_feedback_set(digraph: SignedDigraph, caps: Optional[Caps] = None) -> Tuple[int, ...]:
    """Pick vertices by descending cycle participation until the rest is acyclic."""
    caps = resolve_caps(caps)
    chosen: List[int] = []
    while not digraph.is_acyclic(exclude=chosen):
        remaining = digraph.with_changes(
            remove=[arc for arc in digraph.arcs if arc[0] in chosen or arc[1] in chosen]
        )
        try:
            cycles = enumerate_signed_cycles(remaining, caps)
            weight: Dict[int, int] = {}
            for cycle in cycles:
                for v in cycle.vertices:
                    weight[v] = weight.get(v, 0) + 1
        except SizeCapError:
            logger.warning("too many cycles for participation counts, using degree heuristic")
            weight = {
                v: remaining.in_degree(v) * len(remaining.out_neighbors(v))
                for v in remaining.vertices
                if v not in chosen
            }
        best = max(sorted(weight), key=lambda v: weight[v])
        chosen.append(best)
    return tuple(sorted(chosen))


class AnalysisReport(BaseModel):
    """Exact extremes of φ over F(D)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    phi_max: Optional[int] = None
    phi_min: Optional[int] = None
    family_size: int = 0
    delta: int = 0
    tau_plus: Optional[int] = None
    fvs: List[int] = Field(default_factory=list)
    witnesses: Dict[str, str] = Field(default_factory=dict)
    elapsed_seconds: float = 0.0
    max_witness: Optional[BooleanNetwork] = Field(default=None, exclude=True)
    min_witness: Optional[BooleanNetwork] = Field(default=None, exclude=True)

    def to_json_dict(self) -> Dict[str, object]:
        return self.model_dump(include={"phi_max", "phi_min", "family_size", "delta", "tau_plus", "witnesses"})


def phi_extremes(
    digraph: SignedDigraph,
    caps: Optional[Caps] = None,
    fvs: Optional[Iterable[int]] = None,
    audit: Optional[Audit] = None,
    with_tau: bool = True,
) -> AnalysisReport:
    """φmax(D) and φmin(D) with one witness each; ties go to the first network enumerated."""
    caps = resolve_caps(caps)
    started = time.perf_counter()
    validity = validate_sid(digraph)
    if not validity.valid:
        raise ValidityError(f"not a valid SID, violators {validity.violators}")

    feedback = tuple(sorted(fvs)) if fvs is not None else greedy_feedback_set(digraph, caps)
    if len(feedback) > caps.naive_n:
        raise SizeCapError(f"feedback set of size {len(feedback)} exceeds {caps.naive_n}")
    if len(feedback) == digraph.n and digraph.n:
        logger.warning("no proper feedback vertex set found, counting fixed points naively")
    counter = FvsCounter(digraph, feedback)

    report = AnalysisReport(delta=digraph.max_in_degree, fvs=list(feedback))
    count = 0
    for network in enumerate_networks(digraph, caps, audit):
        count += 1
        phi = counter.count(network)
        if report.phi_max is None or phi > report.phi_max:
            report.phi_max, report.max_witness = phi, network
        if report.phi_min is None or phi < report.phi_min:
            report.phi_min, report.min_witness = phi, network
    report.family_size = count
    if report.max_witness is not None and report.min_witness is not None:
        report.witnesses = {"max": format_bn(report.max_witness), "min": format_bn(report.min_witness)}
    if with_tau:
        try:
            report.tau_plus = tau_plus(digraph, caps)
        except SizeCapError:
            report.tau_plus = None
    report.elapsed_seconds = time.perf_counter() - started
    logger.info(
        f"phi_max={report.phi_max} phi_min={report.phi_min} over {count} networks "
        f"in {report.elapsed_seconds:.3f}s"
    )
    return report


def phi_delta1(digraph: SignedDigraph, caps: Optional[Caps] = None) -> int:
    """φ for in-degree at most one: 0 with a negative cycle, else 2^{c⁺}."""
    if digraph.max_in_degree > 1:
        raise PreconditionError(f"needs in-degree at most 1, got {digraph.max_in_degree}")
    validity = validate_sid(digraph)
    if not validity.valid:
        raise ValidityError(f"not a valid SID, violators {validity.violators}")
    cycles = enumerate_signed_cycles(digraph, caps)
    return 0 if cycles.negative > 0 else 2**cycles.positive


class CycleBound(BaseModel):
    """Bounds on φ read off the cycle signs alone."""

    acyclic: bool
    only_negative: bool
    only_positive: bool
    phi_max_upper: Optional[int] = None
    phi_min_lower: Optional[int] = None


def cycle_sign_bound(digraph: SignedDigraph, caps: Optional[Caps] = None) -> CycleBound:
    cycles = enumerate_signed_cycles(digraph, caps)
    acyclic = len(cycles) == 0
    only_negative = cycles.positive == 0 and cycles.zero == 0
    only_positive = cycles.negative == 0 and cycles.zero == 0
    bound = CycleBound(acyclic=acyclic, only_negative=only_negative, only_positive=only_positive)
    if acyclic:
        bound.phi_max_upper, bound.phi_min_lower = 1, 1
    else:
        if only_negative:
            bound.phi_max_upper = 1
        if only_positive:
            bound.phi_min_lower = 1
    return bound


def problem_verdicts(report: AnalysisReport, k: int) -> Dict[str, Optional[bool]]:
    """Answers to the four threshold questions on φmax and φmin for a computed report."""
    phi_max, phi_min = report.phi_max, report.phi_min
    return {
        "max_ge_k": None if phi_max is None else phi_max >= k,
        "max_lt_k": None if phi_max is None else phi_max < k,
        "min_lt_k": None if phi_min is None else phi_min < k,
        "min_ge_k": None if phi_min is None else phi_min >= k,
        "max_ge_1": None if phi_max is None else phi_max >= 1,
        "min_lt_1": None if phi_min is None else phi_min < 1,
    }
