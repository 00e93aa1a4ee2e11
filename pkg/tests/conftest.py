import functools
import random

import pytest

from sflab.exactnum import set_radical
from sflab.foliation import kronecker_t3, twisted_t4


@pytest.fixture(autouse=True)
def _default_radical():
    set_radical(2)
    yield
    set_radical(2)


@functools.lru_cache(maxsize=None)
def _setup(name):
    return {
        "t3": lambda: kronecker_t3(),
        "t3g1": lambda: kronecker_t3(complement="G1"),
        "t4": lambda: twisted_t4(),
        "t4g0": lambda: twisted_t4("G0"),
    }[name]()


@pytest.fixture
def t3():
    return _setup("t3")


@pytest.fixture
def t4():
    return _setup("t4")


@pytest.fixture(params=["t3", "t4"])
def torus(request):
    return _setup(request.param)


@pytest.fixture
def rng():
    return random.Random(20240611)


def setup_named(name):
    return _setup(name)


def pytest_terminal_summary(terminalreporter):
    from helpers import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
