"""parafw: accelerated stochastic Bregman composite minimization and a
parallel Frank-Wolfe solver built on randomized smoothing of support
functions, with the restart schedule and experiment harness."""

__version__ = "0.1.0"

from parafw.core import NormKind, Point, RhoConstant, norm, pairing, rho_constant, spectral_top
from parafw.lmo import SimplexLMO, TraceBallLMO
from parafw.smoothing import (
    PerturbationKind,
    SmoothingConfig,
    m_constant,
    s1_at_zero,
    sample_perturbation,
    smoothed_support_grad,
    smoothed_support_value,
)

__all__ = [
    "NormKind",
    "PerturbationKind",
    "Point",
    "RhoConstant",
    "SimplexLMO",
    "SmoothingConfig",
    "TraceBallLMO",
    "__version__",
    "m_constant",
    "norm",
    "pairing",
    "rho_constant",
    "s1_at_zero",
    "sample_perturbation",
    "smoothed_support_grad",
    "smoothed_support_value",
    "spectral_top",
]
