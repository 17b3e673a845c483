import pytest

from apnorm.gf import build_field


@pytest.fixture(scope="session")
def f9():
    return build_field(3, 1, 2)


@pytest.fixture(scope="session")
def f27():
    return build_field(3, 1, 3)


@pytest.fixture(scope="session")
def f81():
    return build_field(3, 1, 4)


@pytest.fixture(scope="session")
def f729_tower():
    # F_729 as a degree-3 extension of F_9
    return build_field(3, 2, 3)


@pytest.fixture(scope="session")
def f81_over_f9():
    return build_field(3, 2, 2)
