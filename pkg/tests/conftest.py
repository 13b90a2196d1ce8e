import pytest

from dynstar import Context


@pytest.fixture(scope="session")
def ctx():
    return Context(["lam", "hbar", "t1", "t2", "t3"])
