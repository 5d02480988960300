"""
Identity checks between the gadget side and the formula side.

Every identity computes its left-hand side through bn-analysis on a built
gadget and its right-hand side through the brute-force oracles, then
compares. Cap overruns come back as ``skipped`` reports.
"""

import logging
import time
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from pydantic import BaseModel, Field

from .analysis import AnalysisReport, FvsCounter, cycle_sign_bound, enumerate_networks, phi_extremes
from .cnf import CnfFormula
from .config import Caps, resolve_caps
from .configuration import Configuration
from .digraph import SignedDigraph, tau_plus
from .errors import ArgumentError, SizeCapError, WitnessError
from .gadgets import (
    Gadget,
    Variant,
    add_free_loops,
    build_d_psi,
    degree_reduce,
    epsilon_of,
    extending_fixed_points,
    pad_max,
    pad_min,
    partial_fixed_points,
    strongly_connect,
)
from .instances import Instance, get_instance
from .network import sid_of
from .oracle import alpha_star, evaluate, qsat2_brute, sat_brute, succinct_alpha, succinct_sat_brute
from .succinct import SuccinctRepresentation, canonical_psi_network, psi_feedback_set

logger = logging.getLogger(__name__)


class VerifyStatus(str, Enum):
    """Outcome of one identity check."""
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class VerificationReport(BaseModel):
    """Both sides of an identity and whether they agree."""

    identity: str
    instance: str
    relation: str = ""
    lhs: Any = None
    rhs: Any = None
    status: VerifyStatus = VerifyStatus.SKIPPED
    evaluations: int = 0
    notes: List[str] = Field(default_factory=list)
    measurements: List[Dict[str, Any]] = Field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status is VerifyStatus.PASS


Check = Callable[[Instance, Caps, VerificationReport], bool]
IDENTITIES: Dict[str, Check] = {}


def identity(name: str, relation: str) -> Callable[[Check], Check]:
    """Register a check under ``name``; the check fills lhs/rhs and returns whether it holds."""

    def register(check: Check) -> Check:
        setattr(check, "relation", relation)
        IDENTITIES[name] = check
        return check

    return register


def _need_formula(instance: Instance) -> CnfFormula:
    if instance.formula is None:
        raise ArgumentError(f"instance {instance.name} carries no formula")
    return instance.formula


def _need_s(instance: Instance) -> int:
    formula = _need_formula(instance)
    s = instance.s if instance.s is not None else 1
    if not 1 <= s <= formula.n:
        raise ArgumentError(f"s must lie in 1..{formula.n}, got {s}")
    return s


def _need_digraph(instance: Instance) -> SignedDigraph:
    if instance.digraph is None:
        raise ArgumentError(f"instance {instance.name} carries no digraph")
    return instance.digraph


def _need_succinct(instance: Instance) -> SuccinctRepresentation:
    if instance.succinct is None:
        raise ArgumentError(f"instance {instance.name} carries no succinct representation")
    return instance.succinct


def _gadget_extremes(
    gadget: Gadget, caps: Caps, report: VerificationReport, extra_fvs: Sequence[int] = ()
) -> AnalysisReport:
    fvs = [gadget.layout.ell(0), *extra_fvs]
    result = phi_extremes(gadget.digraph, caps, fvs=fvs, with_tau=False)
    report.evaluations += result.family_size
    return result


def _free_gadget(formula: CnfFormula, s: int, variant: Variant, caps: Caps, report: VerificationReport) -> AnalysisReport:
    gadget = add_free_loops(formula, s, variant)
    loops = [gadget.layout.lam(r) for r in range(s + 1, formula.n + 1)]
    return _gadget_extremes(gadget, caps, report, loops)


@identity("d_psi_max", "phi_max(D_psi) = 2 if psi is satisfiable else 1")
def _d_psi_max(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula = _need_formula(instance)
    result = _gadget_extremes(build_d_psi(formula), caps, report)
    sat = sat_brute(formula, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_max, 2 if sat else 1
    return report.lhs == report.rhs


@identity("d_psi_min", "phi_min(D_psi-) = 0 iff psi is satisfiable")
def _d_psi_min(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula = _need_formula(instance)
    result = _gadget_extremes(build_d_psi(formula, Variant.MIN), caps, report)
    sat = sat_brute(formula, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_min, sat
    return (result.phi_min == 0) == sat


@identity("emajsat_max", "phi_max(D_psi,s) = 2^(n-s) + alpha*")
def _emajsat_max(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula, s = _need_formula(instance), _need_s(instance)
    result = _free_gadget(formula, s, Variant.MAX, caps, report)
    best, witness = alpha_star(formula, s, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_max, (1 << (formula.n - s)) + best
    report.notes.append(f"alpha*={best} at {witness}")
    majority = 2 * best >= 1 << (formula.n - s)
    threshold = 2 * (result.phi_max or 0) >= 3 * (1 << (formula.n - s))
    if majority != threshold:
        report.notes.append(f"majority threshold disagrees: oracle {majority}, gadget {threshold}")
        return False
    return report.lhs == report.rhs


@identity("emajsat_min", "phi_min(D-_psi,s) = 2^(n-s) - alpha*")
def _emajsat_min(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula, s = _need_formula(instance), _need_s(instance)
    result = _free_gadget(formula, s, Variant.MIN, caps, report)
    best, _ = alpha_star(formula, s, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_min, (1 << (formula.n - s)) - best
    return report.lhs == report.rhs


@identity("qsat2_max", "phi_max(D_psi,s) = 2^(n-s+1) iff the QSAT2 instance is true")
def _qsat2_max(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula, s = _need_formula(instance), _need_s(instance)
    result = _free_gadget(formula, s, Variant.MAX, caps, report)
    truth = qsat2_brute(formula, s, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_max, truth
    return (result.phi_max == 1 << (formula.n - s + 1)) == truth


@identity("qsat2_min", "phi_min(D-_psi,s) = 0 iff the QSAT2 instance is true")
def _qsat2_min(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula, s = _need_formula(instance), _need_s(instance)
    result = _free_gadget(formula, s, Variant.MIN, caps, report)
    truth = qsat2_brute(formula, s, caps)
    report.evaluations += 1 << formula.n
    report.lhs, report.rhs = result.phi_min, truth
    return (result.phi_min == 0) == truth


def _canonical_count(
    rep: SuccinctRepresentation, zeta: Configuration, variant: Variant, report: VerificationReport
) -> int:
    gadget, network = canonical_psi_network(rep, zeta, variant)
    if sid_of(network) != gadget.digraph:
        raise WitnessError("canonical network does not realise D_Psi")
    count = FvsCounter(gadget.digraph, psi_feedback_set(rep, gadget)).count(network)
    report.evaluations += 1 << (rep.m + 1)
    return count


def _record_unsatisfying(rep: SuccinctRepresentation, caps: Caps, variant: Variant, report: VerificationReport) -> None:
    """Measured counts next to both candidate closed forms, for every unsatisfying ζ."""
    width = 1 << rep.n
    if width > caps.expand or width > 4:
        report.notes.append("too many variables to sweep unsatisfying assignments")
        return
    clauses = 1 << rep.m
    for bits in range(1 << width):
        zeta = Configuration.full(width, bits)
        alpha = succinct_alpha(rep, zeta)
        if alpha == clauses:
            continue
        measured = _canonical_count(rep, zeta, variant, report)
        sign = 1 if variant is Variant.MAX else -1
        report.measurements.append(
            {
                "zeta": str(zeta),
                "alpha": alpha,
                "measured": measured,
                "2^m+alpha": clauses + sign * alpha,
                "2^(m+1)+alpha": 2 * clauses + sign * alpha,
            }
        )


@identity("succinct_max", "a satisfying zeta yields a network on D_Psi with 2^(m+1) fixed points")
def _succinct_max(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    rep = _need_succinct(instance)
    zeta = succinct_sat_brute(rep, caps)
    report.evaluations += 1 << (1 << rep.n)
    report.notes.append("constructive direction only: F(D_Psi) is not enumerated")
    target = 1 << (rep.m + 1)
    report.rhs = target
    if zeta is None:
        report.lhs = _canonical_count(rep, Configuration.full(1 << rep.n), Variant.MAX, report)
        holds = report.lhs < target
    else:
        report.notes.append(f"satisfying zeta {zeta}")
        report.lhs = _canonical_count(rep, zeta, Variant.MAX, report)
        holds = report.lhs == target
    _record_unsatisfying(rep, caps, Variant.MAX, report)
    return holds


@identity("succinct_min", "a satisfying zeta yields a network on D-_Psi without fixed points")
def _succinct_min(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    rep = _need_succinct(instance)
    zeta = succinct_sat_brute(rep, caps)
    report.evaluations += 1 << (1 << rep.n)
    report.notes.append("constructive direction only: F(D-_Psi) is not enumerated")
    report.rhs = 0
    if zeta is None:
        report.lhs = _canonical_count(rep, Configuration.full(1 << rep.n), Variant.MIN, report)
        holds = report.lhs > 0
    else:
        report.lhs = _canonical_count(rep, zeta, Variant.MIN, report)
        holds = report.lhs == 0
    _record_unsatisfying(rep, caps, Variant.MIN, report)
    return holds


def _ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


@identity("pad_max", "phi_max(pad_max(D,k)) = phi_max(D) * 2^(ceil(log2 k)-1)")
def _pad_max(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    digraph = _need_digraph(instance)
    k = instance.k if instance.k is not None else 3
    base = phi_extremes(digraph, caps, with_tau=False)
    padded = phi_extremes(pad_max(digraph, k), caps, with_tau=False)
    report.evaluations += base.family_size + padded.family_size
    report.lhs = padded.phi_max
    report.rhs = (base.phi_max or 0) * (1 << (_ceil_log2(k) - 1))
    return report.lhs == report.rhs


@identity("pad_min", "phi_min(pad_min(D,k)) = phi_min(D) * 2^ceil(log2 k)")
def _pad_min(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    digraph = _need_digraph(instance)
    k = instance.k if instance.k is not None else 2
    base = phi_extremes(digraph, caps, with_tau=False)
    padded = phi_extremes(pad_min(digraph, k), caps, with_tau=False)
    report.evaluations += base.family_size + padded.family_size
    report.lhs = padded.phi_min
    report.rhs = (base.phi_min or 0) * (1 << _ceil_log2(k))
    return report.lhs == report.rhs


@identity("degree_reduce", "degree reduction keeps phi_max(D_psi) and brings the in-degree to 2")
def _degree_reduce(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    gadget = build_d_psi(_need_formula(instance))
    reduced = degree_reduce(gadget.digraph).digraph
    before = _gadget_extremes(gadget, caps, report)
    after = _gadget_extremes(Gadget(reduced, gadget.layout), caps, report)
    report.lhs, report.rhs = after.phi_max, before.phi_max
    report.notes.append(f"max in-degree {reduced.max_in_degree}")
    return reduced.max_in_degree <= 2 and report.lhs == report.rhs


@identity("strong_connect", "the u, v closure is strongly connected and keeps phi_max")
def _strong_connect(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    gadget = build_d_psi(_need_formula(instance))
    reduced = Gadget(degree_reduce(gadget.digraph).digraph, gadget.layout)
    connected = strongly_connect(reduced.digraph, reduced.layout)
    before = _gadget_extremes(reduced, caps, report)
    after = _gadget_extremes(connected, caps, report)
    report.lhs, report.rhs = after.phi_max, before.phi_max
    strong = connected.digraph.is_strongly_connected()
    report.notes.append(f"strongly connected: {strong}, max in-degree {connected.digraph.max_in_degree}")
    return strong and connected.digraph.max_in_degree <= 2 and report.lhs == report.rhs


@identity("epsilon_correction", "every fixed point of a network with two or more, xored with eps(f), satisfies psi")
def _epsilon_correction(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula = _need_formula(instance)
    gadget = build_d_psi(formula)
    counter = FvsCounter(gadget.digraph, [gadget.layout.ell(0)])
    lam_mask = (1 << formula.n) - 1
    violations = multi = 0
    for network in enumerate_networks(gadget.digraph, caps):
        report.evaluations += 1
        states = list(counter.states(network))
        if len(states) < 2:
            continue
        multi += 1
        eps = epsilon_of(gadget.layout, network).state(formula.n)
        violations += sum(1 for x in states if not evaluate(formula, (x & lam_mask) ^ eps))
    report.lhs, report.rhs = violations, 0
    report.notes.append(f"{multi} networks with at least two fixed points")
    return violations == 0


@identity("extension_bound", "every partial fixed point of D_psi,s extends to at most two fixed points")
def _extension_bound(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    formula, s = _need_formula(instance), _need_s(instance)
    gadget = add_free_loops(formula, s)
    expected = 1 << (formula.n - s)
    worst, counts_ok = 0, True
    for network in enumerate_networks(gadget.digraph, caps):
        report.evaluations += 1
        partial = partial_fixed_points(gadget.digraph, gadget.layout, network, caps)
        counts_ok &= len(partial) == expected
        for z in partial:
            worst = max(worst, len(extending_fixed_points(gadget.digraph, gadget.layout, network, z)))
    report.lhs, report.rhs = worst, 2
    if not counts_ok:
        report.notes.append(f"some network has a partial fixed point count other than {expected}")
    return counts_ok and worst <= 2


@identity("fvs_bound", "phi_max(D) <= 2^tau+(D)")
def _fvs_bound(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    digraph = _need_digraph(instance)
    result = phi_extremes(digraph, caps, with_tau=False)
    report.evaluations += result.family_size
    report.lhs, report.rhs = result.phi_max, 1 << tau_plus(digraph, caps)
    return (report.lhs or 0) <= report.rhs


@identity("cycle_bound", "cycle-sign bounds agree with enumeration")
def _cycle_bound(instance: Instance, caps: Caps, report: VerificationReport) -> bool:
    digraph = _need_digraph(instance)
    result = phi_extremes(digraph, caps, with_tau=False)
    bound = cycle_sign_bound(digraph, caps)
    report.evaluations += result.family_size
    report.lhs = {"phi_max": result.phi_max, "phi_min": result.phi_min}
    report.rhs = bound.model_dump()
    holds = True
    if bound.phi_max_upper is not None and result.phi_max is not None:
        holds &= result.phi_max <= bound.phi_max_upper
    if bound.phi_min_lower is not None and result.phi_min is not None:
        holds &= result.phi_min >= bound.phi_min_lower
    return holds


def verify_identity(
    name: str, instance: Union[Instance, str], caps: Optional[Caps] = None
) -> VerificationReport:
    """Run one named identity on one instance."""
    if name not in IDENTITIES:
        raise ArgumentError(f"unknown identity {name!r}; choose from {', '.join(sorted(IDENTITIES))}")
    if isinstance(instance, str):
        instance = get_instance(instance)
    caps = resolve_caps(caps)
    check = IDENTITIES[name]
    report = VerificationReport(identity=name, instance=instance.name, relation=getattr(check, "relation", ""))
    started = time.perf_counter()
    try:
        holds = check(instance, caps, report)
        report.status = VerifyStatus.PASS if holds else VerifyStatus.FAIL
    except SizeCapError as e:
        report.status = VerifyStatus.SKIPPED
        report.notes.append(f"skipped: {e}")
        logger.warning(f"{name} on {instance.name} skipped: {e}")
    except WitnessError as e:
        report.status = VerifyStatus.FAIL
        report.notes.append(str(e))
    report.elapsed_seconds = time.perf_counter() - started
    if report.status is VerifyStatus.FAIL:
        logger.error(f"{name} failed on {instance.name}: lhs={report.lhs} rhs={report.rhs}")
    else:
        logger.info(f"{name} on {instance.name}: {report.status.value}")
    return report
