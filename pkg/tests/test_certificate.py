"""
Tests for fixed-point certificates.
"""

from itertools import product

import pytest

from fixnet.analysis import phi_extremes
from fixnet.certificate import (
    Certificate,
    certificate_check,
    certificate_search,
    certificate_to_bn,
    harvest_certificate,
)
from fixnet.config import Caps
from fixnet.digraph import Sign, SignedDigraph, validate_sid
from fixnet.errors import ArgumentError, PreconditionError, SizeCapError, StructureError, WitnessError
from fixnet.instances import positive_loop_sid
from fixnet.network import fixed_points_naive, sid_of


class TestHarvest:
    """Test certificates read off concrete networks."""

    def test_harvest_then_check(self, three_cycle, three_cycle_f):
        """Test that a harvested certificate is accepted."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        assert cert.fixed_points == ["011"]
        assert certificate_check(three_cycle, 1, cert)

    def test_too_few_points(self, three_cycle, three_cycle_f):
        """Test asking for more points than the network has."""
        with pytest.raises(WitnessError):
            harvest_certificate(three_cycle, three_cycle_f, 2)

    def test_json_round_trip(self, three_cycle, three_cycle_f):
        """Test that certificates survive JSON."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        assert Certificate.model_validate_json(cert.model_dump_json()) == cert


class TestCheck:
    """Test certificate checking."""

    def test_bad_k(self, three_cycle, three_cycle_f):
        """Test k below one."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        with pytest.raises(ArgumentError):
            certificate_check(three_cycle, 0, cert)

    def test_count_mismatch(self, three_cycle, three_cycle_f):
        """Test a certificate listing fewer configurations than k."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        with pytest.raises(StructureError):
            certificate_check(three_cycle, 2, cert)

    def test_k_above_state_space(self, three_cycle, three_cycle_f):
        """Test that k above 2^n is rejected outright."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        assert not certificate_check(three_cycle, 9, cert)

    def test_unreachable_point(self, three_cycle, three_cycle_f):
        """Test that 000 can never be a fixed point here."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        forged = cert.model_copy(update={"fixed_points": ["000"]})
        assert not certificate_check(three_cycle, 1, forged)
        with pytest.raises(PreconditionError):
            certificate_to_bn(three_cycle, forged)

    def test_wrong_length(self, three_cycle, three_cycle_f):
        """Test configurations of the wrong length."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        forged = cert.model_copy(update={"fixed_points": ["01"]})
        with pytest.raises(StructureError):
            certificate_check(three_cycle, 1, forged)

    def test_missing_witness(self, three_cycle, three_cycle_f):
        """Test a certificate with a dropped arc witness."""
        cert = harvest_certificate(three_cycle, three_cycle_f, 1)
        forged = cert.model_copy(update={"plus": cert.plus[1:]})
        with pytest.raises(StructureError):
            certificate_check(three_cycle, 1, forged)


class TestSearch:
    """Test exhaustive certificate search."""

    def test_found_for_one(self, three_cycle):
        """Test that one fixed point is certified and realised."""
        cert = certificate_search(three_cycle, 1)
        assert cert is not None
        assert certificate_check(three_cycle, 1, cert)
        network = certificate_to_bn(three_cycle, cert)
        assert sid_of(network) == three_cycle
        points = {str(x) for x in fixed_points_naive(network)}
        assert set(cert.fixed_points) <= points

    def test_none_for_two(self, three_cycle):
        """Test that φmax=1 admits no certificate for two points."""
        assert certificate_search(three_cycle, 2) is None

    def test_zero_arc(self, zero_arc):
        """Test that the zero-arc SID has no certificate at all."""
        assert certificate_search(zero_arc, 1) is None

    def test_positive_loop(self):
        """Test that a positive loop certifies both configurations."""
        cert = certificate_search(positive_loop_sid(), 2)
        assert cert.fixed_points == ["0", "1"]

    def test_arguments(self, three_cycle):
        """Test k and size caps."""
        with pytest.raises(ArgumentError):
            certificate_search(three_cycle, 0)
        with pytest.raises(SizeCapError):
            certificate_search(three_cycle, 1, Caps(cert_n=2))


class TestSearchMatchesExtremes:
    """Test certificate search against exact extremes."""

    def test_exhaustive_two_vertex(self):
        """Test that a certificate exists exactly when φmax >= k."""
        slots = [(1, 1), (1, 2), (2, 1), (2, 2)]
        for signs in product([None, Sign.POSITIVE, Sign.NEGATIVE, Sign.ZERO], repeat=len(slots)):
            digraph = SignedDigraph(2, {arc: s for arc, s in zip(slots, signs) if s is not None})
            if not validate_sid(digraph).valid:
                continue
            phi_max = phi_extremes(digraph, with_tau=False).phi_max
            for k in (1, 2, 3):
                cert = certificate_search(digraph, k)
                assert (cert is not None) == (phi_max >= k), f"k={k} on {digraph.arcs}"
                if cert is not None:
                    assert certificate_check(digraph, k, cert)
