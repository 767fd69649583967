import numpy as np
import pytest
from hypothesis import strategies as st

from dsmin.core import DSFunction, TableFunction, random_submodular

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def report(number, passed, detail):
    number = str(number)
    line = f"criterion {number:<3} {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line, flush=True)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE, key=lambda k: (int(k.rstrip("ab")), k)):
            terminalreporter.write_line(ACCEPTANCE[number])


F1 = [0.0, 2.0, 1.0, 2.5]
G1 = [0.0, 1.0, 1.0, 1.5]


@pytest.fixture
def f1():
    return TableFunction(2, F1)


@pytest.fixture
def g1():
    return TableFunction(2, G1)


@pytest.fixture
def v1(f1, g1):
    return DSFunction(f1, g1)


def random_ds(n, seed):
    return DSFunction(random_submodular(n, seed=2 * seed), random_submodular(n, seed=2 * seed + 1))


def brute_min_value(table):
    return float(np.min(table))


small_n = st.integers(min_value=2, max_value=7)
seeds = st.integers(min_value=0, max_value=10_000)
