"""Regime classification and the first-passage asymptotic approximation.

For slope v = x/t the crossing probability P(tau(x) <= t) decays like

    C_gamma * exp(-gamma x)                      if 0 < v < psi'(gamma),
    D_v * t^(-1/2) * exp(-psi*(v) t)             if v > psi'(gamma),

with the boundary v = psi'(gamma) genuinely excluded (the limit may depend
on how x/t approaches v).  The constants C_gamma and D_v are available in
closed form for spectrally one-sided models; for two-sided jumps only the
exponents are produced (prefactor omitted, exponent_only flag set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import RangeError, UnsupportedModelError
from .exponents import ExponentReport, gamma_tilde, legendre, lundberg_gamma
from .models import LevyModel, SpectralClass, mean_rate, psi_derivatives, spectral_class

# Relative half-width of the excluded band around v = psi'(gamma).
BOUNDARY_EPS = 1e-8


class Regime(Enum):
    CRAMER = "cramer"
    LARGE_DEVIATION = "large_deviation"
    BOUNDARY = "boundary"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Asymptotic approximation of log P(tau(x) <= t) plus its ingredients.

    log_prob is nan for the indeterminate (boundary) case; prefactor is None
    when no closed form exists (two-sided models) or at the boundary.
    decay_rate is the per-unit-t exponent: gamma*v in the Cramer regime,
    psi*(v) in the large-deviation regime (they agree at the boundary).
    """

    regime: Regime
    log_prob: float
    decay_rate: float
    prefactor: float | None
    report: ExponentReport
    exponent_only: bool = False


def classify_regime(model: LevyModel, x: float, t: float) -> Regime:
    """Which branch of the asymptotics applies to (x, t)."""
    if x <= 0 or t <= 0:
        raise RangeError(f"classify_regime: x={x!r} and t={t!r} must be positive")
    v = x / t
    gamma = lundberg_gamma(model)
    pg = psi_derivatives(model, gamma)[0]
    return _classify(v, pg)


def _classify(v: float, psi_prime_gamma: float) -> Regime:
    if v < psi_prime_gamma * (1.0 - BOUNDARY_EPS):
        return Regime.CRAMER
    if v > psi_prime_gamma * (1.0 + BOUNDARY_EPS):
        return Regime.LARGE_DEVIATION
    return Regime.BOUNDARY


def cramer_constant(model: LevyModel) -> float:
    """C_gamma for spectrally one-sided models with a positive Lundberg root.

    Spectrally negative: identically 1 (the supremum creeps, no overshoot).
    Spectrally positive: |psi'(0)| / psi'(gamma); the admissible models drift
    to -infinity so psi'(0) < 0, and the absolute value is the sign choice
    that reproduces the classical exponential-claims constant lambda/(c*beta)
    (checked against the perpetual-ruin oracle).
    """
    cls = spectral_class(model)
    if cls is SpectralClass.TWO_SIDED:
        raise UnsupportedModelError("cramer_constant: no closed form for two-sided jump measures")
    gamma = lundberg_gamma(model)
    if gamma <= 0:
        raise RangeError("cramer_constant: requires a positive Lundberg exponent (drift to -infinity)")
    if cls is SpectralClass.SPECTRALLY_NEGATIVE:
        return 1.0
    return abs(mean_rate(model)) / psi_derivatives(model, gamma)[0]


def ld_prefactor(model: LevyModel, v: float) -> float:
    """D_v for spectrally one-sided models, valid for v > psi'(gamma)."""
    cls = spectral_class(model)
    if cls is SpectralClass.TWO_SIDED:
        raise UnsupportedModelError("ld_prefactor: no closed form for two-sided jump measures")
    report = legendre(model, v)
    return _ld_prefactor_from_report(model, cls, report)


def _ld_prefactor_from_report(model: LevyModel, cls: SpectralClass, report: ExponentReport) -> float:
    if report.eta_v <= 0:
        raise RangeError(f"ld_prefactor: v={report.v!r} is not above psi'(gamma)={report.psi_prime_gamma!r}")
    root = math.sqrt(2.0 * math.pi * report.psi_second_at_Gamma)
    if cls is SpectralClass.SPECTRALLY_NEGATIVE:
        return report.v / (report.eta_v * root)
    gt = gamma_tilde(model, report.v)
    g = report.Gamma_v
    return (g + gt) / (g * gt) / root


def approx_passage_prob(model: LevyModel, x: float, t: float) -> AsymptoticEstimate:
    """Evaluate the asymptotic approximation of log P(tau(x) <= t)."""
    if x <= 0 or t <= 0:
        raise RangeError(f"approx_passage_prob: x={x!r} and t={t!r} must be positive")
    v = x / t
    gamma = lundberg_gamma(model)
    pg = psi_derivatives(model, gamma)[0]
    regime = _classify(v, pg)
    cls = spectral_class(model)

    if regime is Regime.CRAMER:
        try:
            report = legendre(model, v)
        except RangeError:
            # only reachable when gamma == 0 and v is below the mean slope:
            # Gamma(v) does not exist but the Cramer branch degenerates to 1
            report = ExponentReport(v, gamma, pg, math.nan, math.nan, math.nan, math.nan)
        if gamma == 0.0:
            # crossing is certain in the limit; the approximation is the constant 1
            return AsymptoticEstimate(regime, 0.0, 0.0, 1.0, report)
        if cls is SpectralClass.TWO_SIDED:
            return AsymptoticEstimate(regime, -gamma * x, gamma * v, None, report, exponent_only=True)
        c = cramer_constant(model)
        return AsymptoticEstimate(regime, math.log(c) - gamma * x, gamma * v, c, report)

    report = legendre(model, v)
    if regime is Regime.BOUNDARY:
        # excluded case: both candidate exponents coincide and live in the report
        return AsymptoticEstimate(Regime.INDETERMINATE, math.nan, gamma * v, None, report)

    exponent = -0.5 * math.log(t) - report.psi_star_v * t
    if cls is SpectralClass.TWO_SIDED:
        return AsymptoticEstimate(regime, exponent, report.psi_star_v, None, report, exponent_only=True)
    d = _ld_prefactor_from_report(model, cls, report)
    return AsymptoticEstimate(regime, math.log(d) + exponent, report.psi_star_v, d, report)
