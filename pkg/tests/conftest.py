"""Shared fixtures: quotient tables are expensive, build each once."""

import pytest

from m36 import chowring, labels


@pytest.fixture(scope="session")
def table():
    """All-line-fiber table, fully exact."""
    return chowring.build_quotient(labels.config_all_p1(), mode="exact")


@pytest.fixture(scope="session")
def table_2p():
    """All-line-fiber table in two-prime mode."""
    return chowring.build_quotient(labels.config_all_p1(), mode="two-prime")


@pytest.fixture(scope="session")
def table_p2():
    """All-plane-fiber table in two-prime mode."""
    return chowring.build_quotient(labels.config_all_p2(), mode="two-prime")
