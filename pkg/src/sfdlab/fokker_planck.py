"""Effective Fokker-Planck equation with a time-dependent diffusion coefficient.

dW/dt = D(t) d2W/dx2 interpolates between ordinary diffusion (D -> D0 as
t -> 0) and the single-file regime (D -> F/(2 sqrt(t)) at long times).  Two
coefficient variants are shipped:

* ``matched``:  D(t) = D0 E_{1/2,1}(-(2 D0/(F sqrt(pi))) sqrt(t)), which
  hits both limits exactly under E(0) = 1;
* ``paper``:    D(t) = D0 sqrt(pi) E_{1/2,1}(-(2 D0/F) sqrt(t)), the literal
  printed coefficient, whose short-time value is D0 sqrt(pi) (kept for
  comparison; its long-time limit is still F/(2 sqrt(t))).

Because D depends on time only, W(x,t) is the heat kernel run to the
effective time s(t) = int_0^t D(u) du.  The solver exploits that: each
Crank-Nicolson step advances by the exact increment of s (closed form via
term-by-term integration of the Mittag-Leffler series), so the numerical
solution is the plain CN heat solution in s and the analytic Gaussian of
variance sigma0^2 + 2 s(t) is a sharp oracle.  Space is discretized in
conservative finite-volume form with no-flux boundaries, so mass is
conserved to solver roundoff; a boundary-leak check guards the domain
truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainSizeError, ParameterError
from .mittag_leffler import ml_eval
from .msd_models import MsdCurve

__all__ = [
    "FpeSolution",
    "diffusion_coefficient",
    "integrated_diffusion",
    "solve_fpe",
    "solution_variance",
]

_VARIANTS = ("matched", "paper")


@dataclass
class FpeSolution:
    """Probability density W(x, t) on a space-time grid, with mass metadata."""

    x_grid: np.ndarray
    t_grid: np.ndarray
    density: np.ndarray = field(repr=False)  # shape (len(t_grid), len(x_grid))
    mass: np.ndarray = field(default=None, repr=False)
    sigma0: float = 0.0
    variant: str = "matched"
    d0: float = 1.0
    f: float = 1.0


def _check_variant(variant: str) -> None:
    if variant not in _VARIANTS:
        raise ParameterError(f"variant must be one of {_VARIANTS}, got {variant!r}")


def diffusion_coefficient(d0: float, f: float, t: float,
                          variant: str = "matched") -> float:
    """Time-dependent diffusion coefficient D(t) of the chosen variant."""
    _check_variant(variant)
    if d0 <= 0.0 or f <= 0.0:
        raise ParameterError("D0 and F must be positive")
    if t < 0.0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    if variant == "matched":
        c = 2.0 * d0 / (f * math.sqrt(math.pi))
        return d0 * ml_eval(0.5, 1.0, -c * math.sqrt(t))
    c = 2.0 * d0 / f
    return d0 * math.sqrt(math.pi) * ml_eval(0.5, 1.0, -c * math.sqrt(t))


def integrated_diffusion(d0: float, f: float, t: float,
                         variant: str = "matched") -> float:
    """Effective time s(t) = int_0^t D(u) du (term-by-term exact)."""
    _check_variant(variant)
    if t < 0.0:
        raise ParameterError(f"t must be nonnegative, got {t}")
    if t == 0.0:
        return 0.0
    if variant == "matched":
        c = 2.0 * d0 / (f * math.sqrt(math.pi))
        return d0 * t * ml_eval(0.5, 2.0, -c * math.sqrt(t))
    c = 2.0 * d0 / f
    return d0 * math.sqrt(math.pi) * t * ml_eval(0.5, 2.0, -c * math.sqrt(t))


def _cn_step(w: np.ndarray, ds: float, dx: float) -> np.ndarray:
    """One Crank-Nicolson heat step of size ds with no-flux boundaries."""
    n = w.size
    r = ds / (2.0 * dx * dx)
    # explicit half: (I + r L) w, conservative no-flux stencil
    rhs = w.copy()
    rhs[1:-1] += r * (w[2:] - 2.0 * w[1:-1] + w[:-2])
    rhs[0] += r * (w[1] - w[0])
    rhs[-1] += r * (w[-2] - w[-1])
    # implicit half: banded (I - r L)
    ab = np.zeros((3, n))
    ab[0, 1:] = -r
    ab[2, :-1] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[1, 0] = 1.0 + r
    ab[1, -1] = 1.0 + r
    return solve_banded((1, 1), ab, rhs)


def solve_fpe(d0: float, f: float, x_half_width: float, nx: int, t_grid,
              variant: str = "matched", sigma0: float | None = None,
              max_ds_fraction: float = 0.05) -> FpeSolution:
    """Solve dW/dt = D(t) d2W/dx2 from a narrow Gaussian centered at 0.

    Parameters
    ----------
    d0, f : float
        Short-time diffusion coefficient and single-file mobility.
    x_half_width : float
        Domain is [-x_half_width, x_half_width]; must hold the density to
        below 1e-12 at the boundaries through the final time (checked).
    nx : int
        Number of grid points (>= 32).
    t_grid : array_like
        Strictly increasing positive output times.
    sigma0 : float, optional
        Initial Gaussian width; defaults to 4 grid cells, must be >= 3.
    max_ds_fraction : float
        Internal substep control: each CN step advances the effective time
        by at most this fraction of the current variance.
    """
    _check_variant(variant)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or t_grid[0] <= 0.0 or np.any(
        np.diff(t_grid) <= 0.0
    ):
        raise ParameterError("t_grid must be strictly increasing and positive")
    if nx < 32:
        raise ParameterError("need nx >= 32")
    if x_half_width <= 0.0:
        raise ParameterError("x_half_width must be positive")
    x = np.linspace(-x_half_width, x_half_width, nx)
    dx = x[1] - x[0]
    if sigma0 is None:
        sigma0 = 4.0 * dx
    if sigma0 < 3.0 * dx:
        raise ParameterError(
            f"initial Gaussian too narrow for the grid: sigma0={sigma0}, dx={dx}"
        )
    w = np.exp(-0.5 * (x / sigma0) ** 2) / (sigma0 * math.sqrt(2.0 * math.pi))
    s_values = [integrated_diffusion(d0, f, float(t), variant) for t in t_grid]
    density = np.empty((t_grid.size, nx))
    mass = np.empty(t_grid.size)
    mass0 = float(np.sum(w) * dx)
    s_now = 0.0
    var_now = sigma0 ** 2
    for k, s_target in enumerate(s_values):
        while s_now < s_target * (1.0 - 1e-14):
            ds = min(s_target - s_now, max_ds_fraction * var_now)
            w = _cn_step(w, ds, dx)
            s_now += ds
            var_now = sigma0 ** 2 + 2.0 * s_now
        density[k] = w
        mass[k] = float(np.sum(w) * dx)
    leak = max(abs(density[-1][0]), abs(density[-1][-1]))
    if leak > 1e-12:
        sigma_final = math.sqrt(sigma0 ** 2 + 2.0 * s_values[-1])
        raise DomainSizeError(
            f"boundary density {leak:.2e} exceeds 1e-12; domain too small",
            suggested_half_width=10.0 * sigma_final,
        )
    drift = float(np.max(np.abs(mass - mass0))) / mass0
    if drift > 1e-8:
        raise ParameterError(f"mass drifted by {drift:.2e} (conservation bug)")
    return FpeSolution(x, t_grid, density, mass, sigma0, variant, d0, f)


def solution_variance(sol: FpeSolution) -> MsdCurve:
    """Centered second moment of W per time slice (trapezoidal), as a curve."""
    out = np.empty(sol.t_grid.size)
    for k in range(sol.t_grid.size):
        w = sol.density[k]
        norm = np.trapezoid(w, sol.x_grid)
        mean = np.trapezoid(sol.x_grid * w, sol.x_grid) / norm
        out[k] = np.trapezoid((sol.x_grid - mean) ** 2 * w, sol.x_grid) / norm
    return MsdCurve(sol.t_grid, out, model_tag=f"fpe-{sol.variant}")
