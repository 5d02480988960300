"""
fixnet - fixed points of Boolean networks over signed interaction digraphs.

Exact extreme fixed-point counts over every network admitting a given SID,
the polynomial decision for a fixed point, fixed-point certificates, and
compilers from SAT-family problems into hardness gadgets checked against
brute-force oracles.
"""

from .analysis import AnalysisReport, count_fixed_points_fvs, enumerate_networks, phi_extremes
from .certificate import Certificate, certificate_check, certificate_search, certificate_to_bn
from .cnf import CnfFormula, parse_dimacs
from .config import Caps, get_caps, set_caps
from .configuration import Configuration
from .digraph import Sign, SignedDigraph, validate_sid
from .errors import FixnetError, SizeCapError
from .gadgets import Variant, build_d_psi, build_d_psi_neg
from .network import BooleanNetwork, LocalFunction, sid_of
from .nice import decide_max_ge1
from .succinct import SuccinctRepresentation, build_d_Psi, expand_succinct
from .suite import SuiteBuilder, SuiteEngine
from .verify import VerificationReport, verify_identity

__version__ = "0.1.0"
__all__ = [
    "AnalysisReport",
    "BooleanNetwork",
    "Caps",
    "Certificate",
    "CnfFormula",
    "Configuration",
    "FixnetError",
    "LocalFunction",
    "Sign",
    "SignedDigraph",
    "SizeCapError",
    "SuccinctRepresentation",
    "SuiteBuilder",
    "SuiteEngine",
    "Variant",
    "VerificationReport",
    "build_d_Psi",
    "build_d_psi",
    "build_d_psi_neg",
    "certificate_check",
    "certificate_search",
    "certificate_to_bn",
    "count_fixed_points_fvs",
    "decide_max_ge1",
    "enumerate_networks",
    "expand_succinct",
    "get_caps",
    "parse_dimacs",
    "phi_extremes",
    "set_caps",
    "sid_of",
    "validate_sid",
    "verify_identity",
]
