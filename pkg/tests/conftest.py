"""
Pytest configuration and fixtures for fixnet tests.
"""

import pytest

from fixnet.analysis import order_properties_hold, set_enumeration_audit
from fixnet.config import set_caps
from fixnet.instances import (
    micro_circuit,
    three_cycle_network,
    three_cycle_sid,
    two_clause_formula,
    zero_arc_sid,
)
from fixnet.network import sid_of


@pytest.fixture(autouse=True)
def reset_caps():
    """Start every test from the default caps."""
    set_caps(None)
    yield
    set_caps(None)


class EnumerationAuditor:
    """Checks every network an enumeration yields: right SID, order properties, no repeats."""

    def __init__(self):
        self.seen = 0
        self._visited = {}

    def __call__(self, digraph, network, position):
        if position == 0:
            self._visited[id(digraph)] = set()
        visited = self._visited.setdefault(id(digraph), set())
        self.seen += 1
        assert sid_of(network) == digraph, f"network #{position} does not realise the SID"
        assert network.functions not in visited, f"network #{position} enumerated twice"
        visited.add(network.functions)
        assert order_properties_hold(digraph, network), f"order properties fail on network #{position}"


@pytest.fixture(autouse=True)
def enumeration_audit():
    """Audit every enumeration of F(D) made anywhere in the test run."""
    auditor = EnumerationAuditor()
    set_enumeration_audit(auditor)
    yield auditor
    set_enumeration_audit(None)


@pytest.fixture
def audit():
    """A fresh auditor for tests that pass one explicitly."""
    return EnumerationAuditor()


@pytest.fixture
def three_cycle():
    """Three-vertex SID with one negative loop and one positive loop."""
    return three_cycle_sid()


@pytest.fixture
def three_cycle_f():
    """The network of the three-cycle SID whose only fixed point is 011."""
    return three_cycle_network()


@pytest.fixture
def zero_arc():
    """SID with a single zero arc and no network having a fixed point."""
    return zero_arc_sid()


@pytest.fixture
def two_clause():
    """(λ1 ∨ ¬λ2 ∨ ¬λ3) ∧ (¬λ1 ∨ ¬λ3)."""
    return two_clause_formula()


@pytest.fixture
def micro():
    """Succinct representation on the eight-vertex micro circuit."""
    return micro_circuit()


# Pytest configuration
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


def pytest_collection_modifyitems(config, items):
    """Automatically mark tests based on their location/name."""
    for item in items:
        if "integration" in item.nodeid or "test_cli" in item.nodeid or "test_suite" in item.nodeid:
            item.add_marker(pytest.mark.integration)
        else:
            item.add_marker(pytest.mark.unit)

        # exhaustive families
        if any(keyword in item.name.lower() for keyword in ["exhaustive", "slow", "family"]):
            item.add_marker(pytest.mark.slow)
