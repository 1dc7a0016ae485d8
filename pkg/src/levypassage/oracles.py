"""Closed-form ground truth used to validate the asymptotics and the sampler.

Two exact results are available for the supported families: the reflection
formula for the first-passage probability of drifted Brownian motion, and
the perpetual ruin probability of the classical risk process with
exponential claims.  Both are evaluated entirely in log-domain so that
probabilities far below the double-precision underflow threshold remain
meaningful; the normal tail uses the scaled complementary error function,
log Phibar(z) = log(erfcx(z/sqrt(2))/2) - z^2/2, which is accurate for
arbitrarily large z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, RangeError


@dataclass(frozen=True)
class LogProb:
    """Natural log of a probability; value <= 0 by construction."""

    value: float

    def __post_init__(self):
        if self.value > 0.0:
            raise ValueError(f"log-probability {self.value!r} above 0")

    def __float__(self) -> float:
        return self.value


def log_normal_tail(z: float) -> float:
    """log of the standard normal upper tail probability, any real z."""
    if z <= 0.0:
        return math.log(special.ndtr(-z))
    return math.log(0.5 * special.erfcx(z / math.sqrt(2.0))) - 0.5 * z * z


def bm_exact_passage(mu: float, sigma: float, x: float, t: float) -> LogProb:
    """log P(sup_{s<=t} (mu s + sigma W_s) > x) by the reflection formula:

        Phibar((x - mu t)/(sigma sqrt(t))) + e^{2 mu x / sigma^2} Phibar((x + mu t)/(sigma sqrt(t)))
    """
    if sigma <= 0:
        raise DomainError(f"bm_exact_passage: sigma={sigma!r} must be > 0")
    if t <= 0:
        raise DomainError(f"bm_exact_passage: t={t!r} must be > 0")
    if x < 0:
        raise DomainError(f"bm_exact_passage: x={x!r} must be >= 0")
    scale = sigma * math.sqrt(t)
    la = log_normal_tail((x - mu * t) / scale)
    lb = 2.0 * mu * x / sigma**2 + log_normal_tail((x + mu * t) / scale)
    return LogProb(min(0.0, float(np.logaddexp(la, lb))))


def bm_asymptotic_ratio(mu: float, sigma: float, v: float, t: float) -> float:
    """log of exact/approximate passage probability at x = v t for drifted BM.

    The approximation is D_v t^(-1/2) e^(-psi*(v) t) with the Brownian closed
    forms psi*(v) = (v - mu)^2 / (2 sigma^2) and
    D_v = 2 v sigma / ((v^2 - mu^2) sqrt(2 pi)); the log-ratio tends to 0 as
    t grows, with an O(1/t) leading correction.
    """
    if mu >= 0:
        raise RangeError(f"bm_asymptotic_ratio: mu={mu!r} must be < 0")
    if v <= -mu:
        raise RangeError(f"bm_asymptotic_ratio: v={v!r} must exceed -mu={-mu!r}")
    psi_star = (v - mu) ** 2 / (2.0 * sigma**2)
    d_v = 2.0 * v * sigma / ((v * v - mu * mu) * math.sqrt(2.0 * math.pi))
    log_approx = math.log(d_v) - 0.5 * math.log(t) - psi_star * t
    return bm_exact_passage(mu, sigma, v * t, t).value - log_approx


def cl_perpetual_ruin(lam: float, beta: float, c: float, x: float) -> LogProb:
    """log P(ruin ever) for the classical risk process with Exp(beta) claims:
    (lambda/(c beta)) e^{-gamma x} with gamma = beta - lambda/c, exact for
    all x >= 0 under the net profit condition lambda/beta < c."""
    if lam <= 0 or beta <= 0 or c <= 0:
        raise DomainError("cl_perpetual_ruin: lam, beta, c must be > 0")
    if lam / beta >= c:
        raise DomainError(f"cl_perpetual_ruin: net profit condition fails (lambda/beta={lam / beta!r} >= c={c!r})")
    if x < 0:
        raise DomainError(f"cl_perpetual_ruin: x={x!r} must be >= 0")
    gamma = beta - lam / c
    return LogProb(math.log(lam / (c * beta)) - gamma * x)
