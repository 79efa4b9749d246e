import re

import numpy as np
import pytest

from photonstats.fockspace import from_probs


def random_distribution(rng, max_n=10, with_vacuum=True):
    """Dirichlet weights on a random support 0..K (or 1..K without vacuum)."""
    k = int(rng.integers(1, max_n + 1))
    w = rng.dirichlet(np.ones(k + 1))
    if not with_vacuum:
        w[0] = 0.0
        w /= w.sum()
    return from_probs(w)


@pytest.fixture
def rng():
    return np.random.default_rng(20190402)


# -- acceptance summary: one line per criterion ------------------------------

_AC_RESULTS = {}
_AC_RE = re.compile(r"test_acceptance\.py::test_(ac\d+)_")


def pytest_runtest_logreport(report):
    m = _AC_RE.search(report.nodeid)
    if not m or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    key = m.group(1)
    ok = report.passed
    prev = _AC_RESULTS.get(key, True)
    _AC_RESULTS[key] = prev and ok


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for key in sorted(_AC_RESULTS, key=lambda k: int(k[2:])):
        status = "PASS" if _AC_RESULTS[key] else "FAIL"
        terminalreporter.write_line(f"[{status}] {key.upper()}: {CRITERIA.get(key, '')}")
