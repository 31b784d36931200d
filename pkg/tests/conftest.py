"""Shared test helpers: independent reference implementations used as oracles."""

import math

import numpy as np
import pytest


def taylor_reference(alpha: float, beta: float, z: float, tol: float = 1e-16,
                     nmax: int = 2000) -> float:
    """Direct Taylor summation of the Mittag-Leffler series.

    Independent of the package internals (plain loop, math.fsum, math.gamma);
    valid only where the series is numerically benign (small |z|).
    """
    terms = []
    zn = 1.0
    for n in range(nmax):
        terms.append(zn / math.gamma(alpha * n + beta))
        zn *= z
        if n > 4 and abs(terms[-1]) < tol and abs(terms[-2]) < tol:
            break
    return math.fsum(terms)


def fit_loglog_slope(times, values) -> float:
    """Least-squares slope of log(values) against log(times)."""
    lt = np.log(np.asarray(times, dtype=float))
    lv = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(lt, lv, 1)[0])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
