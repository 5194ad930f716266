import functools
import os
import tempfile

import pytest

# keep catalog caches out of the user's home directory during tests
os.environ.setdefault("SPLITAUT_CACHE", tempfile.mkdtemp(prefix="splitaut-test-cache-"))

from splitaut.catalog import build_catalog  # noqa: E402

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def catalog_for(p, ell_max=100):
    return build_catalog(p, ell_max)


@pytest.fixture(scope="session")
def catalog():
    return catalog_for


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
