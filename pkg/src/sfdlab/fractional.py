"""Riemann-Liouville fractional integrals and Caputo derivatives.

Two flavors live here: exact power-law rules (used as oracles and for
closed-form work) and uniform-grid product-integration operators.  The grid
integral integrates the weakly singular kernel (t-u)^(order-1) exactly
against a piecewise-linear interpolant (fractional trapezoid rule, global
accuracy O(dt^2) for smooth data); the Caputo derivative uses the classical
L1 scheme (accuracy O(dt^(2-order))).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from .errors import ParameterError

__all__ = [
    "SampledFunction",
    "frac_integral_power",
    "frac_integral_grid",
    "caputo_derivative_grid",
]


@dataclass
class SampledFunction:
    """A function sampled on a uniform time grid t0, t0+dt, ..."""

    t0: float
    dt: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.dt <= 0.0:
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if self.values.ndim != 1 or self.values.size < 2:
            raise ParameterError("need at least 2 samples on a 1-d grid")
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("samples must be finite")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)


def frac_integral_power(mu: float, order: float) -> tuple[float, float]:
    """Power rule for the fractional integral: I^order[t^mu].

    Returns (coefficient, exponent) such that
    I^order[t^mu] = coefficient * t^exponent, i.e.
    (Gamma(mu+1)/Gamma(mu+order+1), mu+order).
    """
    if mu <= -1.0:
        raise ParameterError(f"t^mu is not integrable at 0 for mu={mu}")
    if order <= 0.0:
        raise ParameterError(f"order must be positive, got {order}")
    return gamma(mu + 1.0) / gamma(mu + order + 1.0), mu + order


def _check_grid_input(f: SampledFunction, order: float, upper: float) -> None:
    if not isinstance(f, SampledFunction):
        raise ParameterError("expected a SampledFunction")
    if f.t0 != 0.0:
        raise ParameterError("grid operators require the grid to start at t=0")
    if not (0.0 < order <= upper):
        raise ParameterError(f"order must lie in (0, {upper}], got {order}")


def frac_integral_grid(f: SampledFunction, order: float) -> SampledFunction:
    """Riemann-Liouville fractional integral of order `order` on f's grid.

    Product integration: the kernel (t-u)^(order-1) is integrated exactly
    over every cell against the piecewise-linear interpolant of f, which
    gives the fractional trapezoid weights

        I_n = dt^a/Gamma(a+2) * [c_n f_0 + sum_{j=1}^{n-1} w_{n-j} f_j + f_n],
        w_m = (m+1)^(a+1) - 2 m^(a+1) + (m-1)^(a+1),
        c_n = (n-1)^(a+1) - n^(a+1) + (a+1) n^a.
    """
    _check_grid_input(f, order, 1.0)
    a = float(order)
    y = f.values
    n = y.size
    m = np.arange(n, dtype=float)
    ap1 = a + 1.0
    w = np.zeros(n)
    if n > 1:
        mm = m[1:]
        w[1:] = (mm + 1.0) ** ap1 - 2.0 * mm ** ap1 + (mm - 1.0) ** ap1
    c0 = np.zeros(n)
    c0[1:] = (m[1:] - 1.0) ** ap1 - m[1:] ** ap1 + ap1 * m[1:] ** a
    yin = y.copy()
    yin[0] = 0.0
    conv = np.convolve(yin, w)[:n]
    out = (f.dt ** a / gamma(a + 2.0)) * (c0 * y[0] + conv + yin)
    out[0] = 0.0
    return SampledFunction(0.0, f.dt, out)


def caputo_derivative_grid(f: SampledFunction, order: float) -> SampledFunction:
    """Caputo derivative of order in (0, 1] on f's grid (L1 scheme).

    Difference quotients of f are weighted by the exact cell integrals of the
    (t-u)^(-order) kernel:

        D_n = dt^(-a)/Gamma(2-a) * sum_{k=1}^{n} b_k (f_{n-k+1} - f_{n-k}),
        b_k = k^(1-a) - (k-1)^(1-a).

    order == 1 degenerates to one-sided finite differences.  The value at
    t=0 is 0 (the Caputo derivative of the linear head vanishes there).
    """
    _check_grid_input(f, order, 1.0)
    a = float(order)
    y = f.values
    n = y.size
    if a == 1.0:
        out = np.empty(n)
        out[1:] = np.diff(y) / f.dt
        out[0] = (y[1] - y[0]) / f.dt
        return SampledFunction(0.0, f.dt, out)
    k = np.arange(1, n, dtype=float)
    b = k ** (1.0 - a) - (k - 1.0) ** (1.0 - a)
    df = np.diff(y)
    conv = np.convolve(df, b)[: n - 1]
    out = np.empty(n)
    out[0] = 0.0
    out[1:] = (f.dt ** (-a) / gamma(2.0 - a)) * conv
    return SampledFunction(0.0, f.dt, out)
