import time
from functools import lru_cache

import pytest

from nilpieces.cones import run_census


@lru_cache(maxsize=None)
def cached_census(cone: str, n: int, q: int, bundles=None):
    t0 = time.perf_counter()
    rep = run_census(cone, n, q, bundles=bundles)
    rep.extras["seconds"] = time.perf_counter() - t0
    return rep


@pytest.fixture(scope="session")
def census():
    """Censuses are expensive; share them across test modules."""
    return cached_census


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.TITLES):
        if k in mod.RESULTS:
            terminalreporter.write_line(mod.line(k))
        else:
            terminalreporter.write_line(f"criterion {k:2d} NOT RUN  {mod.TITLES[k]}")
