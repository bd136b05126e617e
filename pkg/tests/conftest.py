import pytest

from evenlat.codes import GqrParams, gqr_code
from evenlat.gluing import glue
from evenlat.lattice import GramLattice

HAMMING = GqrParams(7, 0, 0, 0, 1, 0, 1)
GOLAY = GqrParams(23, 0, 0, 0, 1, 0, 1)
Q_PARAMS = GqrParams(31, 0, 0, 1, 7, 3, 2)
H_R = [1, 6, 29, 34]


@pytest.fixture(scope="session")
def R():
    return GramLattice([[6, 1], [1, 6]], "R")


@pytest.fixture(scope="session")
def A1():
    return GramLattice([[2]], "A1")


@pytest.fixture(scope="session")
def Q():
    return gqr_code(Q_PARAMS, 35)


@pytest.fixture(scope="session")
def hamming():
    return gqr_code(HAMMING, 2)


@pytest.fixture(scope="session")
def golay():
    return gqr_code(GOLAY, 2)


@pytest.fixture(scope="session")
def e8(A1, hamming):
    return glue(A1, 8, hamming)


@pytest.fixture(scope="session")
def LQ(R, Q):
    return glue(R, 32, Q)


@pytest.fixture(scope="session")
def art():
    from evenlat import rank64

    return rank64.build_all()


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        prev = _acceptance.get(name)
        if prev is None or prev == "PASS":
            _acceptance[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
