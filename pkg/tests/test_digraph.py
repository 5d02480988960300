"""
Tests for signed digraphs, configurations and signed cycles.
"""

import pytest

from fixnet.config import Caps
from fixnet.configuration import Configuration
from fixnet.digraph import (
    Sign,
    SignedDigraph,
    enumerate_signed_cycles,
    even_cycle_transform,
    is_positive_feedback_set,
    leq_config,
    minimum_positive_feedback_set,
    product_sign,
    tau_plus,
    validate_sid,
)
from fixnet.errors import ArgumentError, PreconditionError, SizeCapError

P, N, Z = Sign.POSITIVE, Sign.NEGATIVE, Sign.ZERO


class TestSign:
    """Test the Sign enum."""

    def test_products(self):
        """Test sign multiplication."""
        assert P * N is N
        assert N * N is P
        assert Z * P is Z
        assert product_sign([N, N, N]) is N
        assert product_sign([]) is P

    def test_tilde_and_symbols(self):
        """Test tilde bits and symbol round trip."""
        assert N.tilde == 1 and P.tilde == 0 and Z.tilde == 0
        for sign in Sign:
            assert Sign.from_symbol(sign.symbol) is sign

    def test_unknown_symbol(self):
        """Test rejecting unknown symbols."""
        with pytest.raises(ArgumentError):
            Sign.from_symbol("*")


class TestConfiguration:
    """Test Configuration."""

    def test_string_order(self):
        """Test that the string lists x1 first."""
        x = Configuration.from_string("011")
        assert x[1] == 0 and x[2] == 1 and x[3] == 1
        assert str(x) == "011"
        assert x.state(3) == 0b110

    def test_flip_and_restrict(self):
        """Test flipping one vertex and restricting."""
        x = Configuration.from_string("0110")
        assert str(x.flip(1)) == "1110"
        assert str(x.restrict([2, 4])) == "10"
        assert x.restrict([2, 4]).domain == (2, 4)

    def test_extend_conflict(self):
        """Test that extension rejects disagreeing configurations."""
        a = Configuration.from_mapping({1: 1, 2: 0})
        b = Configuration.from_mapping({2: 1, 3: 0})
        with pytest.raises(ArgumentError):
            a.extend(b)
        assert str(a.extend(Configuration.from_mapping({3: 1}))) == "101"

    def test_leq_and_xor(self):
        """Test coordinatewise order and xor."""
        a, b = Configuration.from_string("010"), Configuration.from_string("110")
        assert a.leq(b) and not b.leq(a)
        assert str(a ^ b) == "100"

    def test_bad_bits(self):
        """Test rejecting bits wider than the domain."""
        with pytest.raises(ArgumentError):
            Configuration((1, 2), 4)


class TestSignedDigraph:
    """Test SignedDigraph structure."""

    def test_neighbors(self, three_cycle):
        """Test in- and out-neighborhoods."""
        assert three_cycle.in_neighbors(1) == (1, 3)
        assert three_cycle.out_neighbors(3) == (1, 2, 3)
        assert three_cycle.in_neighbors_by_sign(1, N) == (1, 3)
        assert three_cycle.max_in_degree == 2
        assert three_cycle.sources() == []

    def test_arc_out_of_range(self):
        """Test rejecting arcs outside the vertex range."""
        with pytest.raises(ArgumentError):
            SignedDigraph(2, {(1, 3): P})

    def test_niceness(self, three_cycle, zero_arc):
        """Test nice and full-positive predicates."""
        assert three_cycle.is_nice()
        assert not three_cycle.is_full_positive()
        assert not zero_arc.is_nice()

    def test_equality_ignores_names(self):
        """Test that vertex names do not affect equality."""
        assert SignedDigraph(1, {(1, 1): P}, {1: "a"}) == SignedDigraph(1, {(1, 1): P})

    def test_topological_order(self):
        """Test topological order and its failure on cycles."""
        chain = SignedDigraph(3, {(3, 2): P, (2, 1): N})
        assert chain.topological_order() == [3, 2, 1]
        looped = chain.with_changes(add={(1, 3): P})
        with pytest.raises(PreconditionError):
            looped.topological_order()
        assert looped.topological_order(exclude=[1]) == [3, 2]

    def test_strong_connectivity(self, three_cycle, zero_arc):
        """Test strong connectivity."""
        assert three_cycle.is_strongly_connected()
        assert zero_arc.is_strongly_connected()
        assert not SignedDigraph(2, {(1, 2): P}).is_strongly_connected()


class TestValidity:
    """Test the SID validity criterion."""

    def test_single_zero_with_small_degree(self):
        """Test that a lone zero in-neighbor among fewer than three is invalid."""
        report = validate_sid(SignedDigraph(2, {(1, 1): P, (1, 2): Z}))
        assert not report.valid
        assert report.violators == [2]

    def test_zero_with_three_in_neighbors(self, zero_arc):
        """Test that a zero arc into a vertex of in-degree three is valid."""
        report = validate_sid(zero_arc)
        assert report.valid
        assert not report.nice

    def test_two_zeros(self):
        """Test that two zero in-neighbors are valid (xor)."""
        assert validate_sid(SignedDigraph(3, {(1, 3): Z, (2, 3): Z})).valid

    def test_leq_config(self, three_cycle):
        """Test the per-vertex order on the three-cycle SID."""
        # vertex 1 reads 1 and 3 negatively, so smaller inputs are larger
        x, y = Configuration.from_string("101"), Configuration.from_string("000")
        assert leq_config(three_cycle, 1, x, y)
        assert not leq_config(three_cycle, 1, y, x)
        assert leq_config(three_cycle, 2, y, x)


class TestCycles:
    """Test signed cycle enumeration and feedback sets."""

    def test_three_cycle_cycles(self, three_cycle):
        """Test cycles, their order and signs."""
        cycles = enumerate_signed_cycles(three_cycle)
        assert [c.vertices for c in cycles] == [(1,), (1, 2, 3), (2, 3), (3,)]
        assert [c.sign for c in cycles] == [N, N, P, P]
        assert cycles.positive == 2 and cycles.negative == 2 and cycles.zero == 0

    def test_cycle_cap(self, three_cycle):
        """Test the cycle cap."""
        with pytest.raises(SizeCapError):
            enumerate_signed_cycles(three_cycle, Caps(cycles=2))

    def test_tau_plus(self, three_cycle):
        """Test the minimum positive feedback vertex set."""
        assert tau_plus(three_cycle) == 1
        assert minimum_positive_feedback_set(three_cycle) == (3,)
        assert is_positive_feedback_set(three_cycle, [3])
        assert not is_positive_feedback_set(three_cycle, [1])

    def test_tau_plus_only_negative(self):
        """Test that only negative cycles need no feedback vertices."""
        assert tau_plus(SignedDigraph(1, {(1, 1): N})) == 0

    def test_even_cycle_transform(self, three_cycle):
        """Test subdividing positive arcs."""
        transformed = even_cycle_transform(three_cycle)
        assert transformed.n == 3 + 4
        assert transformed.is_full_positive()
        lengths = sorted(len(c) for c in enumerate_signed_cycles(transformed))
        # positive cycles became even, negative cycles odd
        assert lengths == [1, 2, 4, 5]

    def test_even_cycle_transform_needs_nice(self, zero_arc):
        """Test the niceness precondition."""
        with pytest.raises(PreconditionError):
            even_cycle_transform(zero_arc)
