"""
Tests for the gadget compiler and its post-processing passes.
"""

import pytest

from fixnet.analysis import FvsCounter
from fixnet.configuration import Configuration
from fixnet.cnf import CnfFormula
from fixnet.digraph import Sign
from fixnet.errors import ArgumentError, LayoutError, PreconditionError
from fixnet.gadgets import (
    Variant,
    add_free_loops,
    build_d_psi,
    build_d_psi_neg,
    canonical_bn,
    degree_reduce,
    epsilon_of,
    extending_fixed_points,
    is_extension,
    pad_max,
    pad_min,
    padding_roles,
    partial_fixed_points,
    strongly_connect,
)
from fixnet.instances import fan_in_four_sid
from fixnet.network import sid_of


class TestBuildDPsi:
    """Test D_ψ and its min variant."""

    def test_layout(self, two_clause):
        """Test vertex count and role numbering."""
        digraph, layout = build_d_psi(two_clause)
        assert digraph.n == 4 * 3 + 2 * 2 + 1 == 17
        assert layout.lam(1) == 1
        assert (layout.lam_pos(2), layout.lam_neg(2)) == (6, 7)
        assert layout.ell(0) == 10
        assert (layout.mu(1), layout.c(1), layout.c(3)) == (14, 16, layout.ell(3))
        assert digraph.name(layout.ell(0)) == "ell0"

    def test_arcs(self, two_clause):
        """Test the literal, chain and clause arcs."""
        digraph, layout = build_d_psi(two_clause)
        assert digraph.in_neighbors(layout.mu(1)) == (layout.lam_pos(1), layout.lam_neg(2), layout.lam_neg(3))
        assert digraph.sign(layout.lam(2), layout.lam_neg(2)) is Sign.NEGATIVE
        assert digraph.sign(layout.mu(2), layout.c(2)) is Sign.NEGATIVE
        assert digraph.sources() == [1, 2, 3]
        assert digraph.max_in_degree == 3

    def test_closing_arc(self, two_clause):
        """Test that (c1, ℓ0) is positive for max and negative for min."""
        digraph, layout = build_d_psi(two_clause)
        neg, _ = build_d_psi_neg(two_clause)
        assert digraph.sign(layout.c(1), layout.ell(0)) is Sign.POSITIVE
        assert neg.sign(layout.c(1), layout.ell(0)) is Sign.NEGATIVE
        assert set(neg.arcs) == set(digraph.arcs)

    def test_empty_formulas(self):
        """Test that a gadget needs variables and clauses."""
        with pytest.raises(ArgumentError):
            build_d_psi(CnfFormula.of(2, []))
        with pytest.raises(ArgumentError):
            build_d_psi(CnfFormula.of(0, []))

    def test_layout_errors(self, two_clause):
        """Test unknown and clashing roles."""
        _, layout = build_d_psi(two_clause)
        with pytest.raises(LayoutError):
            layout["nowhere"]
        with pytest.raises(LayoutError):
            layout.with_roles({"ell0": 99})


class TestFreeLoops:
    """Test D_{ψ,s}."""

    def test_loops(self, two_clause):
        """Test loops on the free variables only."""
        digraph, layout = add_free_loops(two_clause, 1)
        assert digraph.has_loop(2) and digraph.has_loop(3)
        assert not digraph.has_loop(1)
        assert is_extension(digraph, layout)

    @pytest.mark.parametrize("s", [0, 4])
    def test_bad_s(self, two_clause, s):
        """Test s outside 1..n."""
        with pytest.raises(ArgumentError):
            add_free_loops(two_clause, s)


class TestCanonicalNetwork:
    """Test the canonical AND/OR network on a gadget."""

    def _count(self, formula, z, variant=Variant.MAX):
        digraph, layout = build_d_psi(formula, variant)
        network = canonical_bn(digraph, layout, Configuration.from_string(z))
        return FvsCounter(digraph, [layout.ell(0)]).count(network)

    def test_satisfying_sources(self, two_clause):
        """Test two fixed points when the sources satisfy ψ."""
        assert self._count(two_clause, "000") == 2

    def test_unsatisfying_sources(self, two_clause):
        """Test one fixed point when the sources falsify ψ."""
        assert self._count(two_clause, "101") == 1

    def test_min_variant(self, two_clause):
        """Test that the negative closing arc kills the fixed points of a satisfying source."""
        assert self._count(two_clause, "000", Variant.MIN) == 0

    def test_realises_gadget(self, two_clause):
        """Test the SID and the ε read-off."""
        digraph, layout = build_d_psi(two_clause)
        network = canonical_bn(digraph, layout, Configuration.from_string("000"))
        assert sid_of(network) == digraph
        assert str(epsilon_of(layout, network)) == "111"

    def test_missing_source(self, two_clause):
        """Test that every source needs a value."""
        digraph, layout = build_d_psi(two_clause)
        with pytest.raises(ArgumentError):
            canonical_bn(digraph, layout, Configuration.from_string("00"))

    def test_partial_and_extending(self, two_clause):
        """Test partial fixed points on the free loops and their extensions."""
        digraph, layout = add_free_loops(two_clause, 1)
        network = canonical_bn(digraph, layout, Configuration((1,), 0))
        partial = partial_fixed_points(digraph, layout, network)
        assert len(partial) == 4
        for z in partial:
            extended = extending_fixed_points(digraph, layout, network, z)
            assert len(extended) == (2 if two_clause.satisfied_by(z.state(3)) else 1)
            assert all(network.is_fixed(x) for x in extended)


class TestDegreeReduction:
    """Test the in-degree two reduction."""

    def test_fan_in_four(self):
        """Test that two chain vertices are added and the in-degree drops to two."""
        reduced, chains = degree_reduce(fan_in_four_sid())
        assert reduced.n == 7
        assert chains == {"chain5_2": 6, "chain5_3": 7}
        assert reduced.max_in_degree == 2
        assert reduced.in_neighbors(6) == (1, 2)
        assert reduced.in_neighbors(7) == (3, 6)
        assert reduced.in_neighbors(5) == (4, 7)

    def test_requires_positive_inputs(self):
        """Test that heavy vertices need positive in-arcs."""
        digraph = fan_in_four_sid().with_changes(add={(1, 5): Sign.NEGATIVE})
        with pytest.raises(PreconditionError):
            degree_reduce(digraph)

    def test_light_digraph_unchanged(self, three_cycle):
        """Test that in-degree two digraphs pass through."""
        reduced, chains = degree_reduce(three_cycle)
        assert reduced == three_cycle
        assert chains == {}


class TestStrongConnection:
    """Test the u, v closure."""

    def test_unit_clause(self):
        """Test that the unit-clause gadget becomes strongly connected."""
        digraph, layout = build_d_psi(CnfFormula.of(1, [[1]]))
        assert digraph.n == 7
        connected, closed = strongly_connect(digraph, layout)
        assert connected.n == 9
        assert connected.is_strongly_connected()
        assert connected.max_in_degree == 2
        assert (closed["u"], closed["v"]) == (8, 9)
        assert connected.sign(layout.ell(0), closed["v"]) is Sign.NEGATIVE


class TestPadding:
    """Test isolated positive loop padding."""

    @pytest.mark.parametrize("k,extra", [(3, 1), (4, 1), (5, 2), (8, 2), (9, 3)])
    def test_pad_max(self, three_cycle, k, extra):
        """Test ⌈log₂k⌉-1 loops."""
        assert pad_max(three_cycle, k).n == 3 + extra

    @pytest.mark.parametrize("k,extra", [(2, 1), (3, 2), (4, 2), (5, 3)])
    def test_pad_min(self, three_cycle, k, extra):
        """Test ⌈log₂k⌉ loops."""
        assert pad_min(three_cycle, k).n == 3 + extra

    def test_bad_k(self, three_cycle):
        """Test the lower limits on k."""
        with pytest.raises(ArgumentError):
            pad_max(three_cycle, 2)
        with pytest.raises(ArgumentError):
            pad_min(three_cycle, 1)

    def test_roles(self, three_cycle):
        """Test the pad role names."""
        padded = pad_min(three_cycle, 4)
        assert padding_roles(padded) == {"pad1": 4, "pad2": 5}
        assert padded.has_loop(5)
