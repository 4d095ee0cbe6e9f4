"""Shared fixtures: kernel tables are comparatively expensive to build, so
the three worked configurations are session-scoped."""

from fractions import Fraction

import pytest

from derivsamp.kernel import inv_symbol_coeffs
from derivsamp.symbol import Kappa

KAPPA_Q3 = Kappa(3, 0, 2)
KAPPA_Q4 = Kappa(4, 0, 3)
KAPPA_Q4H = Kappa(4, Fraction(1, 2), 2)


@pytest.fixture(scope="session")
def table_q3():
    return inv_symbol_coeffs(KAPPA_Q3, tol=1e-12)


@pytest.fixture(scope="session")
def table_q4():
    return inv_symbol_coeffs(KAPPA_Q4, tol=1e-12)


@pytest.fixture(scope="session")
def table_q4h():
    # Wider radius keeps the slowly decaying coefficients testable to 1e-10.
    return inv_symbol_coeffs(KAPPA_Q4H, tol=1e-13, min_radius=24)
