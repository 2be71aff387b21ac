"""Shared fixtures; the expensive balls are built once per session."""

from __future__ import annotations

import pytest

from ggtkit.cayley import ball, cayley_graph
from ggtkit.groups import (
    FreeAbelian,
    FreeGroup,
    FreeProduct,
    cyclic_group,
    heisenberg_group,
    symmetric_group_3,
)


@pytest.fixture(scope="session")
def f2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def z2():
    return FreeAbelian(2)


@pytest.fixture(scope="session")
def heis():
    return heisenberg_group()


@pytest.fixture(scope="session")
def s3():
    return symmetric_group_3()


@pytest.fixture(scope="session")
def z2z3_product():
    return FreeProduct([cyclic_group(2), cyclic_group(3)])


@pytest.fixture(scope="session")
def f2_ball4(f2):
    return ball(f2, 4)


@pytest.fixture(scope="session")
def f2_ball8(f2):
    return ball(f2, 8)


@pytest.fixture(scope="session")
def f2_graph4(f2_ball4):
    return cayley_graph(f2_ball4)


@pytest.fixture(scope="session")
def heis_ball3(heis):
    return ball(heis, 3)


@pytest.fixture(scope="session")
def heis_ball4(heis):
    return ball(heis, 4)


@pytest.fixture(scope="session")
def heis_ball10(heis):
    return ball(heis, 10)
