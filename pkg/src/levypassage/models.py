"""Levy process families with closed-form Laplace exponents.

Supported processes are linear drift + Brownian part + compound Poisson
jumps whose sizes are finite mixtures of (signed) exponentials:

    X(t) = drift * t + sigma * W(t) + sum_{i<=N(t)} J_i,

N Poisson with rate ``intensity`` and J drawn from the mixture.  For this
class the Laplace exponent

    psi(theta) = log E[exp(theta * X(1))]

is rational apart from the Gaussian term, so psi, its derivatives, the
exponential tilt and the sign structure of the jumps are all available
analytically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError, ValidationError

# Evaluations closer than POLE_MARGIN * rate to a mixture pole are rejected
# so root-finders see a clean domain failure instead of huge values.
POLE_MARGIN = 1e-9


class ModelKind(enum.Enum):
    BROWNIAN = "brownian"
    CRAMER_LUNDBERG = "cramer_lundberg"
    JUMP_DIFFUSION = "jump_diffusion"


class SpectralClass(enum.Enum):
    SPECTRALLY_NEGATIVE = "spectrally_negative"
    SPECTRALLY_POSITIVE = "spectrally_positive"
    TWO_SIDED = "two_sided"


class JumpComponent(NamedTuple):
    weight: float
    rate: float
    sign: int  # +1 upward jumps, -1 downward jumps


class Theta(NamedTuple):
    """Maximal open interval on which psi is finite."""

    lower: float
    upper: float


@dataclass(frozen=True)
class JumpSpec:
    """Mixed-exponential compound Poisson jump component.

    Attributes:
        intensity: Poisson arrival rate of jumps (0 means no jumps).
        components: mixture of (weight, rate, sign) triples; weights sum to 1.
    """

    intensity: float = 0.0
    components: tuple[JumpComponent, ...] = ()

    def __post_init__(self):
        if self.intensity < 0:
            raise ValidationError("jump intensity must be >= 0")
        if self.intensity > 0 and not self.components:
            raise ValidationError("positive jump intensity requires at least one component")
        if self.intensity == 0 and self.components:
            raise ValidationError("components given but jump intensity is 0")
        if self.components:
            total = 0.0
            for w, r, s in self.components:
                if not (0.0 < w <= 1.0):
                    raise ValidationError(f"component weight {w} not in (0, 1]")
                if r <= 0.0:
                    raise ValidationError(f"component rate {r} must be > 0")
                if s not in (-1, 1):
                    raise ValidationError(f"component sign {s} must be +1 or -1")
                total += w
            if abs(total - 1.0) > 1e-12:
                raise ValidationError(f"component weights sum to {total!r}, expected 1")

    @property
    def present(self) -> bool:
        return self.intensity > 0


@dataclass(frozen=True)
class LevyModel:
    """Parametric description of a Levy process with non-monotone paths.

    Attributes:
        kind: family tag, used for oracle dispatch and display.
        drift: linear drift per unit time.
        sigma: Gaussian coefficient, >= 0.
        jumps: compound Poisson jump specification.
    """

    kind: ModelKind
    drift: float
    sigma: float
    jumps: JumpSpec

    def __post_init__(self):
        if self.sigma < 0:
            raise ValidationError("sigma must be >= 0")
        self._check_paths_non_monotone()
        self._check_kind_consistency()

    def _check_paths_non_monotone(self) -> None:
        if self.sigma > 0:
            return
        if not self.jumps.present:
            raise ValidationError("monotone paths: pure drift without noise or jumps")
        signs = {c.sign for c in self.jumps.components}
        if signs == {1} and self.drift >= 0:
            raise ValidationError("monotone paths: upward jumps with non-negative drift")
        if signs == {-1} and self.drift <= 0:
            raise ValidationError("monotone paths: downward jumps with non-positive drift")
        if self.drift == 0:
            # Driftless pure compound Poisson is a continuous-time random walk;
            # its supremum moves only at jump epochs, which we do not support.
            raise ValidationError("random-walk case: compound Poisson with zero drift and no Gaussian part")

    def _check_kind_consistency(self) -> None:
        if self.kind is ModelKind.BROWNIAN:
            if self.jumps.present:
                raise ValidationError("brownian kind must not carry jumps")
        elif self.kind is ModelKind.CRAMER_LUNDBERG:
            if self.sigma != 0:
                raise ValidationError("cramer_lundberg kind requires sigma = 0")
            if self.drift >= 0:
                raise ValidationError("cramer_lundberg kind requires positive premium (negative drift)")
            if not self.jumps.present or any(c.sign != 1 for c in self.jumps.components):
                raise ValidationError("cramer_lundberg kind requires upward exponential claims")
        elif self.kind is ModelKind.JUMP_DIFFUSION:
            if not self.jumps.present:
                raise ValidationError("jump_diffusion kind requires a jump component")

    @property
    def theta(self) -> Theta:
        return theta_domain(self)


def brownian(drift: float, sigma: float) -> LevyModel:
    return LevyModel(ModelKind.BROWNIAN, float(drift), float(sigma), JumpSpec())


def cramer_lundberg(intensity: float, claim_rate: float, premium: float) -> LevyModel:
    """Claim-surplus process: claims arrive at `intensity`, sizes Exp(claim_rate),
    premium collected continuously at rate `premium` (drift is -premium)."""
    spec = JumpSpec(float(intensity), (JumpComponent(1.0, float(claim_rate), 1),))
    return LevyModel(ModelKind.CRAMER_LUNDBERG, -float(premium), 0.0, spec)


def jump_diffusion(
    drift: float,
    sigma: float,
    intensity: float,
    components: Sequence[tuple[float, float, int]],
) -> LevyModel:
    spec = JumpSpec(float(intensity), tuple(JumpComponent(float(w), float(r), int(s)) for w, r, s in components))
    return LevyModel(ModelKind.JUMP_DIFFUSION, float(drift), float(sigma), spec)


def theta_domain(model: LevyModel) -> Theta:
    """Maximal interval where psi is finite: bounded by the nearest mixture pole
    on each side (rate r with sign s puts a pole at s*r)."""
    upper = math.inf
    lower = -math.inf
    for _, r, s in model.jumps.components:
        if s == 1:
            upper = min(upper, r)
        else:
            lower = max(lower, -r)
    return Theta(lower, upper)


def _require_interior(model: LevyModel, theta: float, what: str) -> None:
    lo, hi = theta_domain(model)
    lo_adm = lo + POLE_MARGIN * abs(lo) if math.isfinite(lo) else -math.inf
    hi_adm = hi - POLE_MARGIN * hi if math.isfinite(hi) else math.inf
    if not (lo_adm < theta < hi_adm):
        raise DomainError(f"{what}: theta={theta!r} outside the interior ({lo!r}, {hi!r}) of the exponent domain")


def interior_width(model: LevyModel) -> Theta:
    """Admissible open interval after shaving the pole safety margin."""
    lo, hi = theta_domain(model)
    lo_adm = lo + POLE_MARGIN * abs(lo) if math.isfinite(lo) else -math.inf
    hi_adm = hi - POLE_MARGIN * hi if math.isfinite(hi) else math.inf
    return Theta(lo_adm, hi_adm)


def psi(model: LevyModel, theta: float) -> float:
    """Laplace exponent psi(theta) = log E[exp(theta X(1))], exact per family.

    psi(0) = 0 exactly; psi is strictly convex on the interior of its domain.
    Raises DomainError outside the interior (pole margins included).
    """
    _require_interior(model, theta, "psi")
    val = model.drift * theta + 0.5 * model.sigma**2 * theta * theta
    if model.jumps.present:
        # per-component form r/(r - s*theta) - 1 vanishes termwise at theta=0
        jump_sum = 0.0
        for w, r, s in model.jumps.components:
            jump_sum += w * (r / (r - s * theta) - 1.0)
        val += model.jumps.intensity * jump_sum
    return val


def psi_derivatives(model: LevyModel, theta: float) -> tuple[float, float]:
    """(psi'(theta), psi''(theta)) from the analytic per-family formulas."""
    _require_interior(model, theta, "psi_derivatives")
    d1 = model.drift + model.sigma**2 * theta
    d2 = model.sigma**2
    if model.jumps.present:
        lam = model.jumps.intensity
        for w, r, s in model.jumps.components:
            denom = r - s * theta
            d1 += lam * w * s * r / denom**2
            d2 += lam * w * 2.0 * r / denom**3
    return d1, d2


def mean_rate(model: LevyModel) -> float:
    """E[X(1)] = psi'(0)."""
    return psi_derivatives(model, 0.0)[0]


def tilt(model: LevyModel, c: float) -> LevyModel:
    """Exponential change of measure with parameter c, in closed parametric form.

    The returned model has Laplace exponent alpha -> psi(alpha + c) - psi(c):
    drift becomes drift + sigma^2 c, each jump rate r becomes r - s*c, and the
    component intensities rescale by r / (r - s*c).
    """
    _require_interior(model, c, "tilt")
    if c == 0.0:
        return model
    new_drift = model.drift + model.sigma**2 * c
    if not model.jumps.present:
        return LevyModel(model.kind, new_drift, model.sigma, model.jumps)
    scaled = [(w * r / (r - s * c), r - s * c, s) for w, r, s in model.jumps.components]
    total = sum(w for w, _, _ in scaled)
    new_components = tuple(JumpComponent(w / total, r, s) for w, r, s in scaled)
    new_spec = JumpSpec(model.jumps.intensity * total, new_components)
    return LevyModel(model.kind, new_drift, model.sigma, new_spec)


def spectral_class(model: LevyModel) -> SpectralClass:
    """Sign structure of the jump measure, as used by the prefactor closed forms.

    A Gaussian part combined with upward jumps is classified two-sided: the
    spectrally-positive ladder formula assumes no Gaussian component.
    """
    if not model.jumps.present:
        return SpectralClass.SPECTRALLY_NEGATIVE
    signs = {c.sign for c in model.jumps.components}
    if signs == {-1}:
        return SpectralClass.SPECTRALLY_NEGATIVE
    if signs == {1} and model.sigma == 0:
        return SpectralClass.SPECTRALLY_POSITIVE
    return SpectralClass.TWO_SIDED


def model_id(model: LevyModel) -> str:
    """Compact deterministic identifier used in result tables (comma-free so
    CSV rows stay trivially splittable)."""
    if model.kind is ModelKind.BROWNIAN:
        return f"brownian(drift={model.drift:g};sigma={model.sigma:g})"
    if model.kind is ModelKind.CRAMER_LUNDBERG:
        comp = model.jumps.components[0]
        return f"cramer_lundberg(lambda={model.jumps.intensity:g};claim_rate={comp.rate:g};premium={-model.drift:g})"
    comps = "|".join(f"{'+' if c.sign > 0 else '-'}{c.rate:g}:{c.weight:g}" for c in model.jumps.components)
    return (
        f"jump_diffusion(drift={model.drift:g};sigma={model.sigma:g};"
        f"intensity={model.jumps.intensity:g};components={comps})"
    )
