import pytest

from torreg.lattice import Window
from torreg.ring import MonomialModule
from torreg.toric import hirzebruch, p1xp1


@pytest.fixture(scope="session")
def H1():
    return hirzebruch(1)


@pytest.fixture(scope="session")
def H2():
    return hirzebruch(2)


@pytest.fixture(scope="session")
def H3():
    return hirzebruch(3)


@pytest.fixture(scope="session")
def P1P1():
    return p1xp1()


def rank3_module(X):
    """Rank-three module with one relation, generators in degrees
    (-3,3), (-2,2), (-1,2)."""
    return MonomialModule.presented(
        X, [(-3, 3), (-2, 2), (-1, 2)],
        [[(0, 1, (5, 1, 0, 0)), (1, 1, (0, 2, 6, 0)), (2, 1, (0, 2, 5, 0))]],
        torsion_free=True, label="rank3")


@pytest.fixture(scope="session")
def rank3(H2):
    return rank3_module(H2)


@pytest.fixture(scope="session")
def torsion_quotient(H2):
    return MonomialModule.quotient(H2, [(0, 0, 1, 0), (0, 0, 0, 1)], "S/<x2,x3>")


@pytest.fixture(scope="session")
def degs_ideal(H2):
    return MonomialModule.from_ideal(H2, [(1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 1, 0)], "I")


I_GENS = [(1, 0, 0, 1), (0, 2, 4, 0)]
J_GENS = [(0, 0, 0, 1), (3, 1, 0, 0)]
POWERS_WINDOW = Window.square(-1, 11)


# one summary line per acceptance criterion

_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1].split("[")[0]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    num, _, label = name[len("test_criterion_"):].partition("_")
    entry = _CRITERIA.setdefault(int(num), [label.replace("_", " "), True, 0.0])
    entry[1] = entry[1] and not report.failed
    entry[2] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        label, ok, secs = _CRITERIA[num]
        terminalreporter.write_line("criterion %2d %s  %-40s %7.2fs"
                                    % (num, "PASS" if ok else "FAIL", label, secs))
