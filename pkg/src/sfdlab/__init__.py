"""Fractional Langevin models of single-file diffusion.

Mittag-Leffler numerics, fractional-calculus operators, Talbot inverse
Laplace transforms, Langevin Green functions and MSD laws, closed-form MSD
model families, Monte Carlo trajectory validation, and the effective
Fokker-Planck equation.
"""

from .errors import (
    AccuracyError,
    DivergenceError,
    DomainSizeError,
    ParameterError,
    SfdLabError,
    SynthesisError,
    UnsupportedBranchError,
)
from .fokker_planck import (
    FpeSolution,
    diffusion_coefficient,
    integrated_diffusion,
    solution_variance,
    solve_fpe,
)
from .fractional import (
    SampledFunction,
    caputo_derivative_grid,
    frac_integral_grid,
    frac_integral_power,
)
from .gle import (
    AsymptoticLaw,
    GleParams,
    GreenSeriesResult,
    asymptotic_laws,
    attainment_boundary,
    green_closed,
    green_series,
    green_series_grid,
    mean_displacement,
    msd,
    variance,
)
from .laplace import TransferSpec, invert_at, transfer_eval
from .mittag_leffler import ml_eval, ml_eval_on_grid, ml_kernel
from .msd_models import (
    FamilyCalibration,
    MsdCurve,
    PhysicalChannel,
    brandani_msd,
    calibrate_family,
    lin_msd,
    local_exponent,
    log_time_grid,
    ml_family_msd,
    regime_boundaries,
    three_regime_msd,
)
from .simulate import (
    NoiseSpec,
    TrajectoryEnsemble,
    cell_covariance,
    ensemble_msd,
    sample_noise,
    simulate_paths,
)

__version__ = "0.1.0"
