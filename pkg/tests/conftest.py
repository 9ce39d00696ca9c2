import functools

import numpy as np
import pytest

from bimatcrack import fieldops as fo
from bimatcrack import mode3 as m3
from bimatcrack import oracles as orc

N_DEFAULT = 1024


@functools.lru_cache(maxsize=None)
def grid(n=N_DEFAULT, side="negative"):
    return fo.make_grid(side, n)


@functools.lru_cache(maxsize=None)
def oracle_solution(case, n=N_DEFAULT):
    """Forward solve of an oracle case, cached across tests."""
    g = grid(n)
    constants = orc.case_constants(case)
    loading = m3.Mode3Loading(*orc.case_loading(case, g))
    return loading, m3.solve_forward(loading, constants), constants


def rel_max(a, b, mask=None):
    a, b = np.asarray(a), np.asarray(b)
    if mask is not None:
        a, b = a[..., mask], b[..., mask]
    return float(np.max(np.abs(a - b)) / (np.max(np.abs(b)) or 1.0))


_ACCEPTANCE_LINES = []


def record(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def g1024():
    return grid(1024)
