"""Closed-form MSD models of single-file diffusion and regime analysis.

All models share the two defining limits of single-file transport: ordinary
diffusion R^2 -> 2 D0 t at short times and R^2 -> 2 F sqrt(t), with F the
single-file mobility, at long times.  Implemented here:

* the Brandani interpolation  l^2 (1-theta)(t/tau) / (1 + theta sqrt(pi/2) sqrt(t/tau)),
* the Lin harmonic-sum ansatz 1/R^2 = 1/(2 D0 t) + 1/(2 F sqrt(t)),
* the Mittag-Leffler family  2 kT zeta' t E_{1/2,beta}(-lambda' sqrt(t))
  calibrated to the pore parameters (l, theta, tau),
* the three-regime expression 2 kT t^2 E_{3/2,3}(-lambda2 t^(3/2)) going
  ballistic -> normal -> single-file,

plus local log-log exponent extraction and regime-interval location.

The family's lambda' calibration: matching the long-time limit requires
lambda' = theta Gamma(beta) sqrt(pi) / (Gamma(beta-1/2) sqrt(2 tau)), which
reduces to theta sqrt(2/tau) at beta = 2.  The alternative
theta Gamma(beta-1/2)/sqrt(2 tau) (kept available as ``paper_literal``)
breaks the long-time limit away from the base case and is retained only for
comparison output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import ParameterError
from .mittag_leffler import ml_eval

__all__ = [
    "PhysicalChannel",
    "MsdCurve",
    "FamilyCalibration",
    "brandani_msd",
    "lin_msd",
    "calibrate_family",
    "ml_family_msd",
    "three_regime_msd",
    "local_exponent",
    "regime_boundaries",
    "log_time_grid",
]


@dataclass(frozen=True)
class PhysicalChannel:
    """Pore-hopping parameters: jump length l, occupancy theta, jump time tau."""

    l: float
    theta: float
    tau: float

    def __post_init__(self):
        if self.l <= 0.0 or self.tau <= 0.0:
            raise ParameterError("l and tau must be positive")
        if not (0.0 < self.theta < 1.0):
            raise ParameterError(
                f"theta must lie strictly in (0, 1), got {self.theta}"
            )

    @property
    def d0(self) -> float:
        """Short-time diffusion coefficient l^2 (1-theta) / (2 tau)."""
        return self.l ** 2 * (1.0 - self.theta) / (2.0 * self.tau)

    @property
    def sfd_mobility(self) -> float:
        """Single-file mobility F = l^2 ((1-theta)/theta) / sqrt(2 pi tau).

        This is the prefactor of the long-time law R^2 = 2 F sqrt(t); the
        1/sqrt(tau) keeps it dimensionally consistent with the hopping limit
        l^2 ((1-theta)/theta) sqrt(2/pi) sqrt(t/tau) for any jump time (the
        tau-free form quoted in parts of the literature assumes tau = 1).
        """
        return self.l ** 2 * (1.0 - self.theta) / (
            self.theta * math.sqrt(2.0 * math.pi * self.tau)
        )


@dataclass
class MsdCurve:
    """A mean-square-displacement trace on a strictly increasing time grid."""

    times: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None = None
    model_tag: str = ""

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ParameterError("times and values must be matching 1-d arrays")
        if np.any(self.times <= 0.0) or np.any(np.diff(self.times) <= 0.0):
            raise ParameterError("times must be positive and strictly increasing")
        if np.any(self.values < 0.0):
            raise ParameterError("MSD values must be nonnegative")
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
            if self.stderr.shape != self.times.shape or np.any(self.stderr < 0.0):
                raise ParameterError("stderr must be nonnegative and match times")


class FamilyCalibration(NamedTuple):
    zeta_prime: float
    lambda_prime: float        # asymptotically matched (default)
    lambda_prime_paper: float  # literal variant, comparison only


def brandani_msd(ch: PhysicalChannel, t: float) -> float:
    """Brandani interpolation between normal and single-file diffusion."""
    if t <= 0.0:
        raise ParameterError(f"t must be positive, got {t}")
    x = t / ch.tau
    return ch.l ** 2 * (1.0 - ch.theta) * x / (
        1.0 + ch.theta * math.sqrt(math.pi / 2.0) * math.sqrt(x)
    )


def lin_msd(d0: float, f: float, t: float) -> float:
    """Harmonic-sum ansatz: R^2 = 2 D0 t / (1 + D0 sqrt(t) / F)."""
    if d0 <= 0.0 or f <= 0.0:
        raise ParameterError("D0 and F must be positive")
    if t <= 0.0:
        raise ParameterError(f"t must be positive, got {t}")
    return 2.0 * d0 * t / (1.0 + d0 * math.sqrt(t) / f)


def calibrate_family(ch: PhysicalChannel, beta: float, kT: float) -> FamilyCalibration:
    """Calibrate the Mittag-Leffler family to the channel's D0 and F.

    zeta' fixes the short-time limit:  zeta' = l^2 (1-theta) Gamma(beta) / (2 kT tau).
    lambda' fixes the long-time limit by matching the leading large-argument
    term of E_{1/2,beta}:  lambda' = theta Gamma(beta) sqrt(pi) /
    (Gamma(beta-1/2) sqrt(2 tau)).  The literal alternative
    theta Gamma(beta-1/2)/sqrt(2 tau) is returned alongside for comparison.
    """
    if beta < 1.0:
        raise ParameterError(f"beta must be >= 1 for a monotone family, got {beta}")
    if kT <= 0.0:
        raise ParameterError(f"kT must be positive, got {kT}")
    zeta_prime = ch.l ** 2 * (1.0 - ch.theta) * gamma_fn(beta) / (2.0 * kT * ch.tau)
    lam_matched = (
        ch.theta * gamma_fn(beta) * math.sqrt(math.pi)
        / (gamma_fn(beta - 0.5) * math.sqrt(2.0 * ch.tau))
    )
    lam_paper = ch.theta * gamma_fn(beta - 0.5) / math.sqrt(2.0 * ch.tau)
    return FamilyCalibration(zeta_prime, lam_matched, lam_paper)


def ml_family_msd(ch: PhysicalChannel, beta: float, kT: float, t: float,
                  paper_literal: bool = False) -> float:
    """Mittag-Leffler MSD family: R^2 = 2 kT zeta' t E_{1/2,beta}(-lambda' sqrt(t))."""
    if t <= 0.0:
        raise ParameterError(f"t must be positive, got {t}")
    cal = calibrate_family(ch, beta, kT)
    lam = cal.lambda_prime_paper if paper_literal else cal.lambda_prime
    return 2.0 * kT * cal.zeta_prime * t * ml_eval(0.5, beta, -lam * math.sqrt(t))


def three_regime_msd(kT: float, lambda2: float, t: float) -> float:
    """Ballistic -> normal -> single-file MSD: 2 kT t^2 E_{3/2,3}(-lambda2 t^(3/2))."""
    if kT <= 0.0 or lambda2 <= 0.0:
        raise ParameterError("kT and lambda2 must be positive")
    if t <= 0.0:
        raise ParameterError(f"t must be positive, got {t}")
    return 2.0 * kT * t * t * ml_eval(1.5, 3.0, -lambda2 * t ** 1.5)


def local_exponent(curve: MsdCurve) -> tuple[np.ndarray, np.ndarray]:
    """Centered log-log slope d log R^2 / d log t at the interior grid points."""
    if curve.times.size < 3:
        raise ParameterError("need at least 3 points for a centered slope")
    if np.any(curve.values <= 0.0):
        raise ParameterError("local exponents need strictly positive values")
    lt = np.log(curve.times)
    lv = np.log(curve.values)
    slope = (lv[2:] - lv[:-2]) / (lt[2:] - lt[:-2])
    return curve.times[1:-1], slope


def regime_boundaries(curve: MsdCurve, targets, tol: float):
    """Maximal time intervals where the local exponent sits within tol of a target.

    Returns a list of (target_exponent, t_enter, t_exit) tuples, one per
    maximal interval, in scan order; empty list when no point qualifies.
    """
    tt, slope = local_exponent(curve)
    out = []
    for target in targets:
        inside = np.abs(slope - float(target)) <= tol
        i = 0
        while i < inside.size:
            if inside[i]:
                j = i
                while j + 1 < inside.size and inside[j + 1]:
                    j += 1
                out.append((float(target), float(tt[i]), float(tt[j])))
                i = j + 1
            else:
                i += 1
    return out


def log_time_grid(t_min: float, t_max: float, points_per_decade: int = 20) -> np.ndarray:
    """Log-uniform grid, the figure convention (20 points per decade)."""
    if not (0.0 < t_min < t_max):
        raise ParameterError("need 0 < t_min < t_max")
    if points_per_decade < 1:
        raise ParameterError("points_per_decade must be >= 1")
    n = int(round(math.log10(t_max / t_min) * points_per_decade)) + 1
    return np.geomspace(t_min, t_max, max(n, 2))
