"""
Tests for local functions and Boolean networks.
"""

import pytest

from fixnet.config import Caps
from fixnet.configuration import Configuration
from fixnet.digraph import Sign
from fixnet.errors import SizeCapError, StructureError
from fixnet.network import (
    BooleanNetwork,
    LocalFunction,
    LocalKind,
    and_function,
    classify_local,
    fixed_points_naive,
    or_function,
    sid_of,
)


class TestLocalFunction:
    """Test truth-table local functions."""

    def test_row_order(self):
        """Test that the smallest in-neighbor is the low bit of the row."""
        fn = LocalFunction((2, 5), 0b0100)  # true only for x2=0, x5=1
        assert fn.evaluate(0b10000) == 1
        assert fn.evaluate(0b00010) == 0
        assert fn.row(0b10010) == 3

    def test_signs(self):
        """Test effective-input signs."""
        xor = LocalFunction((1, 2), 0b0110)
        assert xor.local_signs() == {1: Sign.ZERO, 2: Sign.ZERO}
        implication = LocalFunction.disjunction({1: 1, 2: 0})
        assert implication.local_signs() == {1: Sign.NEGATIVE, 2: Sign.POSITIVE}
        ignoring = LocalFunction((1, 2), 0b1010)  # reads x1 only
        assert ignoring.local_signs() == {1: Sign.POSITIVE}

    def test_constants(self):
        """Test constant functions."""
        assert LocalFunction.constant(1).evaluate(0) == 1
        assert LocalFunction.constant(0).local_signs() == {}

    def test_unsorted_inputs(self):
        """Test rejecting unsorted in-neighborhoods."""
        with pytest.raises(StructureError):
            LocalFunction((2, 1), 0)

    def test_table_too_wide(self):
        """Test rejecting tables wider than 2^arity rows."""
        with pytest.raises(StructureError):
            LocalFunction((1,), 0b100)


class TestBooleanNetwork:
    """Test networks, their SID and fixed points."""

    def test_sid_of_three_cycle(self, three_cycle, three_cycle_f):
        """Test that the SID of the sample network is the three-cycle SID."""
        assert sid_of(three_cycle_f) == three_cycle

    def test_single_fixed_point(self, three_cycle_f):
        """Test the unique fixed point 011."""
        assert [str(x) for x in fixed_points_naive(three_cycle_f)] == ["011"]
        assert three_cycle_f(Configuration.from_string("011")) == Configuration.from_string("011")
        assert three_cycle_f.step(0b000) == 0b001

    def test_naive_cap(self, three_cycle_f):
        """Test the naive scan cap."""
        with pytest.raises(SizeCapError):
            fixed_points_naive(three_cycle_f, Caps(naive_n=2))

    def test_identity_network(self):
        """Test that the identity network has two positive loops and fixes everything."""
        identity = BooleanNetwork.from_mapping(2, {1: LocalFunction((1,), 0b10), 2: LocalFunction((2,), 0b10)})
        assert sid_of(identity).arcs == {(1, 1): Sign.POSITIVE, (2, 2): Sign.POSITIVE}
        assert len(fixed_points_naive(identity)) == 4

    def test_missing_function(self):
        """Test that every vertex needs a local function."""
        with pytest.raises(StructureError):
            BooleanNetwork.from_mapping(2, {1: LocalFunction.constant(0)})

    def test_replace(self, three_cycle_f):
        """Test replacing one local function."""
        changed = three_cycle_f.replace({1: LocalFunction.disjunction({1: 1, 3: 1})})
        assert [str(x) for x in fixed_points_naive(changed)] == ["110"]


class TestClassification:
    """Test AND/OR/COPY classification."""

    def test_kinds(self, three_cycle, three_cycle_f):
        """Test classifying the sample network."""
        assert classify_local(three_cycle_f, 1) is LocalKind.AND
        assert classify_local(three_cycle_f, 2) is LocalKind.OR
        assert and_function(three_cycle, 3) == three_cycle_f.local(3)
        assert or_function(three_cycle, 2) == three_cycle_f.local(2)

    def test_copy_and_constants(self):
        """Test COPY, constants and OTHER."""
        network = BooleanNetwork.from_mapping(
            3,
            {
                1: LocalFunction((1,), 0b01),
                2: LocalFunction.constant(1),
                3: LocalFunction((1, 2), 0b0110),
            },
        )
        assert classify_local(network, 1) is LocalKind.COPY
        assert classify_local(network, 2) is LocalKind.CONST1
        assert classify_local(network, 3) is LocalKind.OTHER
