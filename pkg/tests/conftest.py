from functools import lru_cache

import pytest
from hypothesis import settings

from nbjohnson.scheme import SchemeParams, build_adjacency
from nbjohnson.spectra import SpectralData, build_idempotents

settings.register_profile("exact", max_examples=40, deadline=None)
settings.load_profile("exact")

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def instance(r: int, k: int, n: int):
    """(family, spectral data, idempotents) for J_r(k,n), shared across the session."""
    params = SchemeParams(r, k, n)
    fam = build_adjacency(params)
    spectral = SpectralData(params)
    return fam, spectral, build_idempotents(fam, spectral)


@pytest.fixture
def j323():
    return instance(3, 2, 3)


@pytest.fixture
def j324():
    return instance(3, 2, 4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
