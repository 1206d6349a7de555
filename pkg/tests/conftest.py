"""Pytest configuration and fixtures."""

import pytest

from src.fpn.group import GroupCtx
from src.fpn.linalg import Subspace
from src.fpn.sets import FpSet
from src.utils.rng import make_rng


@pytest.fixture(scope="session")
def f2_3() -> GroupCtx:
    """F_2^3, the smallest group with interesting subspaces."""
    return GroupCtx(2, 3)


@pytest.fixture(scope="session")
def f3_2() -> GroupCtx:
    return GroupCtx(3, 2)


@pytest.fixture(scope="session")
def f2_4() -> GroupCtx:
    return GroupCtx(2, 4)


@pytest.fixture(scope="session")
def f3_3() -> GroupCtx:
    return GroupCtx(3, 3)


@pytest.fixture(scope="function")
def rng():
    """A fresh seeded generator per test, so tests do not depend on run order."""
    return make_rng(12345)


@pytest.fixture(scope="session")
def plane(f2_3) -> Subspace:
    """The plane spanned by e1 and e2 in F_2^3."""
    return Subspace.from_rows(f2_3, [[1, 0, 0], [0, 1, 0]])


@pytest.fixture(scope="session")
def corner(f2_3) -> FpSet:
    """{0, e1, e2}: not a coset, |A - A| = 4."""
    return FpSet.from_vectors(f2_3, [(0, 0, 0), (1, 0, 0), (0, 1, 0)])


@pytest.fixture(scope="session")
def line_f3(f3_2) -> FpSet:
    """The line {t (1, 2)} in F_3^2."""
    return FpSet.from_vectors(f3_2, [(0, 0), (1, 2), (2, 1)])
