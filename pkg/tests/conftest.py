from __future__ import annotations

import numpy as np
import pytest

from algroups.gf import make_field
from algroups.nilalg import builtin_algebra
from tests.acceptance_log import ACCEPTANCE


@pytest.fixture(scope="session")
def F2():
    return make_field(2)


@pytest.fixture(scope="session")
def F3():
    return make_field(3)


@pytest.fixture(scope="session")
def F4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def u3(F2):
    return builtin_algebra("upper_triangular", F2, 3)


@pytest.fixture(scope="session")
def u4(F2):
    return builtin_algebra("upper_triangular", F2, 4)


@pytest.fixture(scope="session")
def x2(F2):
    return builtin_algebra("truncated_poly", F2, 2)


@pytest.fixture(scope="session")
def t3(F2):
    return builtin_algebra("truncated_poly", F2, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
