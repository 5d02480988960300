"""
Tests for succinct formulas and the D_Ψ pipeline.
"""

import random
from dataclasses import replace

import pytest

from fixnet.analysis import FvsCounter
from fixnet.config import Caps
from fixnet.configuration import Configuration
from fixnet.errors import NamingError, SizeCapError, StructureError
from fixnet.gadgets import Variant, is_extension
from fixnet.network import sid_of
from fixnet.oracle import succinct_literals
from fixnet.succinct import (
    SuccinctRepresentation,
    assignment_to_circuit,
    build_c_prime,
    build_d_Psi,
    canonical_psi_network,
    expand_succinct,
    extract_assignment,
    is_consistent,
    psi_feedback_set,
    psi_of,
)
from tests.families import random_succinct


class TestExpansion:
    """Test the explicit formula behind the micro circuit."""

    def test_triples(self, micro):
        """Test the clause literals in position order 01, 10, 11."""
        expanded = expand_succinct(micro)
        assert expanded.triples == [(2, -3, -4), (-2, -4, -4)]
        assert expanded.formula.n == 4
        assert expanded.formula.clauses == ((2, -3, -4), (-2, -4))
        assert expanded.formula.name(2) == "L01"

    def test_dimensions(self, micro):
        """Test n, m and the circuit size."""
        assert (micro.n, micro.m, micro.size) == (2, 1, 8)

    def test_cap(self, micro):
        """Test the expansion cap."""
        with pytest.raises(SizeCapError):
            expand_succinct(micro, Caps(expand=1))

    def test_overlapping_roles(self, micro):
        """Test that role sets must be disjoint."""
        with pytest.raises(StructureError):
            SuccinctRepresentation(micro.circuit, U=(1,), P=(2, 3), W=(6, 8), rho=8)

    def test_from_roles(self, micro):
        """Test building from circuit-file roles."""
        rep = SuccinctRepresentation.from_roles(micro.circuit, {"U": [1], "P": [2, 3], "W": [6, 7], "rho": [8]})
        assert rep == micro
        with pytest.raises(StructureError):
            SuccinctRepresentation.from_roles(micro.circuit, {"U": [1], "P": [2], "W": [6, 7], "rho": [8]})

    @pytest.mark.parametrize("seed", range(10))
    def test_expansion_matches_oracle_family(self, seed):
        """Test that expansion and the oracle read the same literals off random circuits."""
        rep = random_succinct(random.Random(seed), m=1 + seed % 2, hidden=seed % 4)
        expanded = expand_succinct(rep)
        assert expanded.triples == succinct_literals(rep)
        assert expanded.formula.m == 1 << rep.m
        assert expanded.formula.n == 1 << rep.n


class TestCPrime:
    """Test the selector circuit C'."""

    def test_selectors(self, micro):
        """Test the in-degrees of p1 and ν."""
        digraph = build_c_prime(micro).digraph
        assert digraph.n == 11
        assert digraph.in_degree(2) == 3
        assert not digraph.has_loop(2)
        assert digraph.in_degree(11) == 4
        assert digraph.name(11) == "nu"

    def test_reserved_name(self, micro):
        """Test that circuits may not already use the selector names."""
        circuit = replace(micro.circuit, names={8: "nu"})
        rep = SuccinctRepresentation(circuit, U=(1,), P=(2, 3), W=(6, 7), rho=8)
        with pytest.raises(NamingError):
            build_c_prime(rep)

    def test_psi(self, micro):
        """Test ω plus the three glue clauses."""
        psi = psi_of(micro)
        assert psi.n == 9
        assert psi.m == 15
        assert (2, 3) in psi.clauses


class TestAssignmentCircuit:
    """Test h' built from an assignment ζ."""

    @pytest.mark.parametrize("bits", [0b0000, 0b0010])
    def test_extract_round_trip(self, micro, bits):
        """Test that ζ is read back from the fixed points of h'."""
        zeta = Configuration.full(4, bits)
        h_prime = assignment_to_circuit(micro, zeta)
        assert sid_of(h_prime) == build_c_prime(micro).digraph
        assert is_consistent(micro, h_prime)
        assert extract_assignment(micro, h_prime) == zeta


class TestDPsi:
    """Test the glued digraph D_Ψ."""

    def test_size(self, micro):
        """Test the vertex count against the linear size bound."""
        digraph, layout = build_d_Psi(micro)
        assert digraph.n == 69
        assert digraph.n <= 10 * micro.size + 13
        assert is_extension(digraph, layout)
        assert layout["nu"] == 11

    def test_canonical_max(self, micro):
        """Test 2^(m+1) fixed points for a satisfying ζ."""
        gadget, network = canonical_psi_network(micro, Configuration.full(4, 0))
        assert sid_of(network) == gadget.digraph
        counter = FvsCounter(gadget.digraph, psi_feedback_set(micro, gadget))
        assert counter.count(network) == 4

    def test_canonical_min(self, micro):
        """Test no fixed point on the min variant for a satisfying ζ."""
        gadget, network = canonical_psi_network(micro, Configuration.full(4, 0), Variant.MIN)
        counter = FvsCounter(gadget.digraph, psi_feedback_set(micro, gadget))
        assert counter.count(network) == 0
