"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import pytest

from bquad.enumerator import ENUMERATION_CAP


def small_cells(cap: int = ENUMERATION_CAP):
    """All (n, sigma) with 1 <= sigma and 2n + sigma <= cap."""
    out = []
    for sigma in range(1, cap + 1):
        n = 0
        while 2 * n + sigma <= cap:
            out.append((n, sigma))
            n += 1
    return out


@pytest.fixture(scope="session")
def cells6():
    return small_cells(6)


@pytest.fixture(scope="session")
def cells8():
    return small_cells(8)
