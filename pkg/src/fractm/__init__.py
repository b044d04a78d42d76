"""Numerical toolkit for sharp Trudinger-Moser suprema in fractional dimensions."""

from .errors import ConstraintError, DomainError, EvaluationError, RegimeError, ResolutionError
from .functionals import (
    FunctionalReport,
    critical_objective,
    evaluate,
    identity_ratio,
    phi_p,
    subcritical_objective,
    tm_integral,
)
from .measure import QuadratureRule, WeightParams, ball_volume, full_norm, gamma_fn, norm_grad_lp_alpha, norm_lq_theta, omega
from .optimize import (
    OptimizerConfig,
    SupremumEstimate,
    TestFamilySpec,
    maximize_tmc,
    maximize_tmsc,
    sigma_star_probe,
    sweep_subcritical,
    tmc_via_identity,
)
from .profiles import RadialGrid, RadialProfile, make_ishiwata, make_moser, rescale

__version__ = "0.1.0"
