import pytest

from fusioninv.catalog import builtin_ring, builtin_solution
from fusioninv.ring import automorphism_group

_LOG = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def fib():
    return builtin_ring("fib")


@pytest.fixture(scope="session")
def trivial():
    return builtin_ring("trivial")


@pytest.fixture(scope="session")
def z3():
    return builtin_ring("z3")


@pytest.fixture(scope="session")
def repds3():
    return builtin_ring("repds3")


@pytest.fixture(scope="session")
def repds3_group(repds3):
    return automorphism_group(repds3)


@pytest.fixture(scope="session")
def fib_sol(fib):
    return builtin_solution("fib", fib)


@pytest.fixture(scope="session")
def yanglee_sol(fib):
    return builtin_solution("yanglee", fib)


@pytest.fixture(scope="session")
def trivial_sol(trivial):
    return builtin_solution("trivial", trivial)


@pytest.fixture(scope="session")
def acceptance_log(request):
    log = request.config.stash.setdefault(_LOG, [])
    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
