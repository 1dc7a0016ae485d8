"""Root-finding layer on top of the Laplace exponent.

Everything here reduces to scalar roots of psi or psi' on their increasing
branches: the Lundberg exponent gamma (positive root of psi), the right
inverse Gamma(v) of psi', the largest roots Phi(alpha) of psi(theta) = alpha,
the mirrored root used by spectrally positive prefactors, and the convex
conjugate psi*(v) = v*Gamma(v) - psi(Gamma(v)) assembled into one report.

Roots are found by bracketing (doubling outward, or geometric approach
toward a finite pole) followed by Newton steps safeguarded with bisection;
psi is smooth and strictly convex on the bracket so convergence is fast and
the iterate never leaves the bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NoRootError, RangeError
from .models import LevyModel, interior_width, mean_rate, psi, psi_derivatives

_MAX_ITER = 200
_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class ExponentReport:
    """All exponent-level quantities for one (model, slope) pair.

    gamma is 0 (not a root) when the process does not drift to -infinity;
    downstream code must treat that case via the Cramer-condition flag
    gamma > 0 rather than trusting psi(gamma) = 0.
    """

    v: float
    gamma: float
    psi_prime_gamma: float
    Gamma_v: float
    eta_v: float
    psi_star_v: float
    psi_second_at_Gamma: float


def _newton_bracketed(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
) -> float:
    """Root of increasing f on [lo, hi] with f(lo) <= 0 <= f(hi)."""
    x = 0.5 * (lo + hi)
    for _ in range(_MAX_ITER):
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        d = df(x)
        step_ok = False
        if d > 0:
            x_new = x - fx / d
            if lo < x_new < hi:
                x = x_new
                step_ok = True
        if not step_ok:
            x = 0.5 * (lo + hi)
        if hi - lo <= abs(x) * 1e-16:
            return x
    return x


def _expand_up(
    f: Callable[[float], float],
    start: float,
    limit: float,
    what: str,
) -> float:
    """Smallest probe b > start with f(b) > 0, for increasing f with f(start) <= 0.

    `limit` is the admissible upper end (pole minus margin, or +inf).
    """
    if math.isfinite(limit):
        for k in range(1, 80):
            b = limit - (limit - start) * 0.5**k
            if f(b) > 0:
                return b
        if f(limit) > 0:
            return limit
        raise NoRootError(f"{what}: no root below the domain boundary at {limit!r}")
    step = max(1.0, abs(start))
    b = start
    for _ in range(200):
        b = b + step
        if f(b) > 0:
            return b
        step *= 2.0
    raise NoRootError(f"{what}: function stays non-positive on the search range")


def _sup_slope(model: LevyModel) -> float:
    """Limit of psi' at the upper end of the domain."""
    if model.sigma > 0:
        return math.inf
    if any(c.sign == 1 for c in model.jumps.components):
        return math.inf  # psi' blows up at the positive-jump pole
    return model.drift  # downward jumps decay, the slope saturates at the drift


def inverse_psi_prime(model: LevyModel, v: float) -> float:
    """Gamma(v): the unique theta > 0 region solution of psi'(theta) = v.

    Raises RangeError when v is outside the open range of psi' on the
    positive half of the domain (including the boundary-steepness case
    where v reaches the saturation slope of a diffusion-free model).
    """
    m = mean_rate(model)
    if v <= m:
        raise RangeError(f"inverse_psi_prime: v={v!r} is at or below psi'(0)={m!r}")
    sup_slope = _sup_slope(model)
    if v >= sup_slope:
        raise RangeError(f"inverse_psi_prime: v={v!r} is at or above the supremum slope {sup_slope!r}")
    _, hi_adm = interior_width(model)

    def f(th: float) -> float:
        return psi_derivatives(model, th)[0] - v

    def df(th: float) -> float:
        return psi_derivatives(model, th)[1]

    hi = _expand_up(f, 0.0, hi_adm, "inverse_psi_prime")
    tol = _RESIDUAL_TOL * max(1.0, abs(v))
    return _newton_bracketed(f, df, 0.0, hi, tol)


def lundberg_gamma(model: LevyModel) -> float:
    """Lundberg exponent: the positive root of psi, or 0.0 when psi'(0) >= 0.

    The returned 0.0 is a flag (the Cramer condition fails; there is no
    exponential decay rate), not a root certificate.
    """
    if mean_rate(model) >= 0:
        return 0.0
    theta_min = inverse_psi_prime(model, 0.0)
    _, hi_adm = interior_width(model)

    def f(th: float) -> float:
        return psi(model, th)

    def df(th: float) -> float:
        return psi_derivatives(model, th)[0]

    hi = _expand_up(f, theta_min, hi_adm, "lundberg_gamma")
    root = _newton_bracketed(f, df, theta_min, hi, _RESIDUAL_TOL)
    tol = _RESIDUAL_TOL * max(1.0, abs(psi_derivatives(model, root)[0]))
    if abs(psi(model, root)) > tol:
        raise NoRootError(f"lundberg_gamma: residual {psi(model, root)!r} above tolerance")
    return root


def big_phi(model: LevyModel, alpha: float) -> float:
    """Phi(alpha): the largest root of psi(theta) = alpha, for alpha >= 0.

    Phi(0) equals the Lundberg exponent when the process drifts to -infinity.
    """
    if alpha < 0:
        raise RangeError(f"big_phi: alpha={alpha!r} must be >= 0")
    m = mean_rate(model)
    if m < 0:
        lo = inverse_psi_prime(model, 0.0)
    else:
        lo = 0.0
        if alpha == 0.0:
            return 0.0
    _, hi_adm = interior_width(model)

    def f(th: float) -> float:
        return psi(model, th) - alpha

    def df(th: float) -> float:
        return psi_derivatives(model, th)[0]

    hi = _expand_up(f, lo, hi_adm, "big_phi")
    return _newton_bracketed(f, df, lo, hi, _RESIDUAL_TOL * max(1.0, alpha))


def gamma_tilde(model: LevyModel, v: float) -> float:
    """Largest theta > 0 with psi(-theta) = psi(Gamma(v)).

    Defined for the large-deviation side (psi(Gamma(v)) > 0); used by the
    spectrally positive prefactor.
    """
    g = inverse_psi_prime(model, v)
    eta = psi(model, g)
    if eta <= 0:
        raise RangeError(f"gamma_tilde: psi(Gamma(v))={eta!r} <= 0, v is not beyond psi'(gamma)")
    lo_adm, _ = interior_width(model)
    limit = -lo_adm if math.isfinite(lo_adm) else math.inf

    def f(s: float) -> float:
        return psi(model, -s) - eta

    def df(s: float) -> float:
        return -psi_derivatives(model, -s)[0]

    hi = _expand_up(f, 0.0, limit, "gamma_tilde")
    return _newton_bracketed(f, df, 0.0, hi, _RESIDUAL_TOL * max(1.0, eta))


def legendre(model: LevyModel, v: float) -> ExponentReport:
    """Assemble gamma, Gamma(v), eta_v = psi(Gamma(v)), the convex conjugate
    psi*(v) = v Gamma(v) - psi(Gamma(v)) and psi''(Gamma(v)) for one slope."""
    gamma = lundberg_gamma(model)
    psi_prime_gamma = psi_derivatives(model, gamma)[0]
    g = inverse_psi_prime(model, v)
    eta = psi(model, g)
    psi_star = v * g - eta
    psi_second = psi_derivatives(model, g)[1]
    return ExponentReport(
        v=v,
        gamma=gamma,
        psi_prime_gamma=psi_prime_gamma,
        Gamma_v=g,
        eta_v=eta,
        psi_star_v=psi_star,
        psi_second_at_Gamma=psi_second,
    )
