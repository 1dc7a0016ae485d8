"""Finite-time first-passage asymptotics for Levy processes with exponential
moments, with closed-form oracles and rare-event Monte Carlo validation."""

from .asymptotics import (
    AsymptoticEstimate,
    Regime,
    approx_passage_prob,
    classify_regime,
    cramer_constant,
    ld_prefactor,
)
from .errors import (
    DomainError,
    LevyPassageError,
    NoRootError,
    ParseError,
    RangeError,
    UnsupportedModelError,
    ValidationError,
)
from .exponents import (
    ExponentReport,
    big_phi,
    gamma_tilde,
    inverse_psi_prime,
    legendre,
    lundberg_gamma,
)
from .models import (
    JumpComponent,
    JumpSpec,
    LevyModel,
    ModelKind,
    SpectralClass,
    Theta,
    brownian,
    cramer_lundberg,
    jump_diffusion,
    mean_rate,
    model_id,
    psi,
    psi_derivatives,
    spectral_class,
    theta_domain,
    tilt,
)
from .oracles import LogProb, bm_asymptotic_ratio, bm_exact_passage, cl_perpetual_ruin, log_normal_tail
from .simulation import (
    CltDiagnostic,
    PathResult,
    SimConfig,
    SimResult,
    clt_diagnostic,
    first_passage,
    mc_plain,
    mc_tilted,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEstimate",
    "CltDiagnostic",
    "DomainError",
    "ExponentReport",
    "JumpComponent",
    "JumpSpec",
    "LevyModel",
    "LevyPassageError",
    "LogProb",
    "ModelKind",
    "NoRootError",
    "ParseError",
    "PathResult",
    "RangeError",
    "Regime",
    "SimConfig",
    "SimResult",
    "SpectralClass",
    "Theta",
    "UnsupportedModelError",
    "ValidationError",
    "approx_passage_prob",
    "big_phi",
    "bm_asymptotic_ratio",
    "bm_exact_passage",
    "brownian",
    "cl_perpetual_ruin",
    "classify_regime",
    "clt_diagnostic",
    "cramer_constant",
    "cramer_lundberg",
    "first_passage",
    "gamma_tilde",
    "inverse_psi_prime",
    "jump_diffusion",
    "ld_prefactor",
    "legendre",
    "log_normal_tail",
    "lundberg_gamma",
    "mc_plain",
    "mc_tilted",
    "mean_rate",
    "model_id",
    "psi",
    "psi_derivatives",
    "spectral_class",
    "theta_domain",
    "tilt",
]
