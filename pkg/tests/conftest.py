import pytest

from sudler import make_ctx


@pytest.fixture(scope="session")
def ctx():
    return make_ctx(192)


@pytest.fixture(scope="session")
def ctx128():
    return make_ctx(128)
