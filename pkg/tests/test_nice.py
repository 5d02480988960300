"""
Tests for the polynomial φmax >= 1 decision and fixed-point lifting.
"""

import random
from itertools import product

import pytest

from fixnet.analysis import enumerate_networks, phi_extremes
from fixnet.configuration import Configuration
from fixnet.digraph import Sign, SignedDigraph, enumerate_signed_cycles, even_cycle_transform, validate_sid
from fixnet.errors import PreconditionError, WitnessError
from fixnet.network import sid_of
from fixnet.nice import decide_max_ge1, has_positive_cycle, initial_components, lift_fixed_point, nicefy
from tests.families import all_sids, has_network_with_fixed_point, random_valid_sid

P, N, Z = Sign.POSITIVE, Sign.NEGATIVE, Sign.ZERO


class TestNicefy:
    """Test zero-arc removal."""

    def test_single_zero(self, zero_arc):
        """Test that a lone zero arc is dropped and nothing else."""
        nice = nicefy(zero_arc)
        assert set(zero_arc.arcs) - set(nice.arcs) == {(1, 2)}
        assert nice.is_nice()

    def test_several_zeros(self):
        """Test that a vertex with two zero in-neighbors loses every in-arc."""
        digraph = SignedDigraph(3, {(1, 3): Z, (2, 3): Z, (3, 3): P, (1, 1): P})
        nice = nicefy(digraph)
        assert nice.in_neighbors(3) == ()
        assert (1, 1) in nice.arcs

    def test_already_nice(self, three_cycle):
        """Test that nice digraphs are unchanged."""
        assert nicefy(three_cycle) == three_cycle


class TestPositiveCycle:
    """Test the positive-cycle test and initial components."""

    def test_three_cycle(self, three_cycle):
        """Test finding the positive cycles."""
        assert has_positive_cycle(three_cycle)
        assert not has_positive_cycle(SignedDigraph(1, {(1, 1): N}))

    def test_requires_nice(self, zero_arc):
        """Test the no-zero-arc precondition."""
        with pytest.raises(PreconditionError):
            has_positive_cycle(zero_arc)

    def test_initial_components(self, zero_arc):
        """Test that only {2, 3} is initial once the zero arc is gone."""
        assert initial_components(nicefy(zero_arc)) == [frozenset({2, 3})]


class TestDecision:
    """Test decide_max_ge1."""

    def test_three_cycle_yes(self, three_cycle):
        """Test a positive answer with a synthesized witness."""
        decision = decide_max_ge1(three_cycle, synthesize=True)
        assert decision.answer
        assert str(decision.fixed_point) == "100"
        assert decision.witness.is_fixed(decision.fixed_point.bits)
        assert sid_of(decision.witness) == three_cycle
        assert decision.witness == list(enumerate_networks(three_cycle))[4]

    def test_zero_arc_no(self, zero_arc):
        """Test a negative answer."""
        decision = decide_max_ge1(zero_arc, synthesize=True)
        assert not decision.answer
        assert decision.witness is None

    def test_acyclic_yes(self):
        """Test that acyclic digraphs always have a fixed point."""
        digraph = SignedDigraph(3, {(1, 2): N, (2, 3): P, (1, 3): N})
        decision = decide_max_ge1(digraph, synthesize=True)
        assert decision.answer
        assert decision.witness.is_fixed(decision.fixed_point.bits)

    def test_exhaustive_two_vertex(self):
        """Test the decision against exact extremes on every valid two-vertex SID."""
        slots = [(1, 1), (1, 2), (2, 1), (2, 2)]
        checked = 0
        for signs in product([None, P, N, Z], repeat=len(slots)):
            arcs = {arc: s for arc, s in zip(slots, signs) if s is not None}
            digraph = SignedDigraph(2, arcs)
            if not validate_sid(digraph).valid:
                continue
            checked += 1
            expected = phi_extremes(digraph, with_tau=False).phi_max >= 1
            decision = decide_max_ge1(digraph, synthesize=True)
            assert decision.answer == expected, f"disagreement on {arcs}"
            if decision.answer:
                assert decision.witness.is_fixed(decision.fixed_point.bits)
                assert sid_of(decision.witness) == digraph
        assert checked > 0

    def test_exhaustive_three_vertex(self):
        """Test the decision on every valid SID with three vertices."""
        checked = 0
        for digraph in all_sids(3):
            if not validate_sid(digraph).valid:
                continue
            checked += 1
            assert decide_max_ge1(digraph).answer == has_network_with_fixed_point(digraph), dict(digraph.arcs)
        assert checked > 10000

    def test_exhaustive_even_cycles(self):
        """Test that positive cycles match even cycles of the transformed digraph on every nice 3-vertex SID."""
        for digraph in all_sids(3, (P, N)):
            even = any(len(c) % 2 == 0 for c in enumerate_signed_cycles(even_cycle_transform(digraph)))
            assert has_positive_cycle(digraph) == even, dict(digraph.arcs)

    @pytest.mark.slow
    def test_random_six_vertex_samples(self):
        """Test the decision on 1000 seeded random six-vertex SIDs."""
        rng = random.Random(2024)
        for _ in range(1000):
            digraph = random_valid_sid(rng, 6)
            assert decide_max_ge1(digraph).answer == has_network_with_fixed_point(digraph), dict(digraph.arcs)

    def test_fixed_point_oracle_agrees_with_enumeration(self):
        """Test the per-vertex oracle against exact extremes on random three-vertex SIDs."""
        rng = random.Random(7)
        for _ in range(25):
            digraph = random_valid_sid(rng, 3, max_in_degree=2)
            assert has_network_with_fixed_point(digraph) == (phi_extremes(digraph, with_tau=False).phi_max >= 1)


class TestLift:
    """Test lifting a fixed point from the nice digraph to F(D)."""

    def test_single_zero_guard(self):
        """Test a vertex with one zero in-neighbor among three."""
        digraph = SignedDigraph(4, {(1, 1): P, (2, 2): P, (3, 3): P, (1, 4): Z, (2, 4): P, (3, 4): P})
        network = lift_fixed_point(digraph, Configuration.full(4, 0))
        assert network.is_fixed(0)
        assert sid_of(network) == digraph

    def test_single_zero_impossible(self):
        """Test that x4=1 cannot be fixed while its positive inputs are 0."""
        digraph = SignedDigraph(4, {(1, 1): P, (2, 2): P, (3, 3): P, (1, 4): Z, (2, 4): P, (3, 4): P})
        with pytest.raises(WitnessError):
            lift_fixed_point(digraph, Configuration.from_string("0001"))

    def test_many_zero_parity(self):
        """Test the parity gate on every configuration."""
        digraph = SignedDigraph(3, {(1, 1): P, (2, 2): P, (1, 3): Z, (2, 3): Z, (3, 3): P})
        for y in Configuration.all_over((1, 2, 3)):
            network = lift_fixed_point(digraph, y)
            assert network.is_fixed(y.bits)
            assert sid_of(network) == digraph

    def test_domain_mismatch(self, three_cycle):
        """Test that y must cover every vertex."""
        with pytest.raises(PreconditionError):
            lift_fixed_point(three_cycle, Configuration.from_string("01"))
