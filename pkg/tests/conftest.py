import pytest

from interlab.extreal import set_backing


@pytest.fixture(scope="session", autouse=True)
def rational_backing():
    # The acceptance suite demands exact verdicts; individual tests that
    # exercise float backing switch and restore it themselves.
    set_backing("rational")
    yield
    set_backing("rational")
