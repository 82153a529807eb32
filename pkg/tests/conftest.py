"""Shared fixtures."""

import pytest


@pytest.fixture(scope="session")
def connected_catalogue():
    from boxchrom.smallgraphs import connected_graphs

    return {n: connected_graphs(n) for n in range(1, 7)}
