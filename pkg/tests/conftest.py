"""
Shared pytest configuration
"""
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx
import pytest

from core.graph import from_networkx


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive checks over every graph up to order 10")


@pytest.fixture(scope="session")
def atlas_subcubic():
    """Connected subcubic graphs with 1..7 vertices from the networkx atlas"""
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if nx.is_connected(h) and max((d for _, d in h.degree()), default=0) <= 3:
            out.append(from_networkx(h))
    return out
