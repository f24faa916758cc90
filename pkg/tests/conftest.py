import os
import random

import pytest

from zchambers.exact_linalg import SymmetricIntMatrix


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ZCHAMBERS_EXTENDED") == "1":
        return
    skip = pytest.mark.skip(reason="extended run; set ZCHAMBERS_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def random_symmetric(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> SymmetricIntMatrix:
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(lo, hi)
    return SymmetricIntMatrix(rows)


def diagonally_heavy(rng: random.Random, n: int) -> SymmetricIntMatrix:
    """Random symmetric matrix with a positive diagonal, so that many subsets pass."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = rng.randint(1, 3)
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = rng.choice((-1, 0, 0, 0, 1))
    return SymmetricIntMatrix(rows)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
