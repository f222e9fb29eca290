import sys
import functools

import pytest

from detblow.bminimal import sample_bminimal
from detblow.hilburch import sample_nondegenerate


def linear_matrix(sigma, n=3, seed=1, p=None):
    kw = {} if p is None else {"p": p}
    return sample_nondegenerate([[1] * (sigma + 1)] * sigma, n, seed, **kw)


@functools.lru_cache(maxsize=None)
def cached_linear(sigma, n=3, seed=1):
    return linear_matrix(sigma, n, seed)


@functools.lru_cache(maxsize=None)
def cached_bminimal(s, seed=1):
    return sample_bminimal(s, seed=seed)


@pytest.fixture(scope="session")
def c75():
    return cached_bminimal(7)


@pytest.fixture(scope="session")
def twisted_cubic():
    return cached_linear(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
