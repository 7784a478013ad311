import pytest

from acceptance_log import LINES as ACCEPTANCE_LINES
from tmodarcs.arc128 import ARC128_WEIGHTS, assemble_weighted_arc, partition_by_invariants, search_cap20
from tmodarcs.constructions import quadric_arc, standard_quadric
from tmodarcs.gf import GF
from tmodarcs.pg import build_space


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def pg25():
    return build_space(GF(5), 2)


@pytest.fixture(scope="session")
def pg35():
    return build_space(GF(5), 3)


@pytest.fixture(scope="session")
def cap20(pg35):
    return search_cap20(pg35, seed=0)


@pytest.fixture(scope="session")
def partition(pg35, cap20):
    return partition_by_invariants(pg35, cap20)


@pytest.fixture(scope="session")
def arc128(partition):
    return assemble_weighted_arc(partition, ARC128_WEIGHTS)


@pytest.fixture(scope="session")
def arc143(pg35):
    return quadric_arc(standard_quadric(pg35, "elliptic"), 1)


@pytest.fixture(scope="session")
def arc168(pg35):
    return quadric_arc(standard_quadric(pg35, "hyperbolic"), 1)
