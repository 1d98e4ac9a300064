"""Shared fixtures: expensive derived artifacts are computed once per session."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def pair():
    from steane_se.reference import load_reference

    return load_reference()


@pytest.fixture(scope="session")
def bfs_result():
    from steane_se.search import bfs_min_cnots

    return bfs_min_cnots()


@pytest.fixture(scope="session")
def tables_x():
    from steane_se.circuit import Basis
    from steane_se.reference import reference_tables

    return reference_tables(Basis.X)


@pytest.fixture(scope="session")
def tables_z():
    from steane_se.circuit import Basis
    from steane_se.reference import reference_tables

    return reference_tables(Basis.Z)
