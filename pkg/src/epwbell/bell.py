"""Sign-correlation functionals for the coherent ⊗ squeezed EPR pair.

Two branches live here.

*Delta limit.* With the squeezed vacuum replaced by ``K * delta(P)`` the
reduced position density is ``w(q, tau)`` and the opposite-sign functional
``F(tau)`` has a closed form. ``K`` multiplies the whole of ``F``; both
terms come from moments of ``w``, which is itself proportional to ``K``.

*Finite squeezing.* The exact normalized state is propagated through the
Gaussian algebra of :mod:`epwbell.phase_space` and the opposite-sign mass of
its position marginal is integrated numerically. Comparing the two gives
the effective normalization ``K_eff(tau) = F_finite / F_closed(K=1)``.
"""

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from .errors import DomainError
from .numerics import erf, erfc, integrate_1d
from .numerics.quadrature import TAIL_SIGMAS
from .phase_space import (
    ModePairParams,
    PositionMarginal,
    TimePair,
    as_time_pair,
    free_evolution,
    marginal_positions,
    prepared_state,
)

SQRT_PI = math.sqrt(math.pi)
_SQRT2 = math.sqrt(2.0)
# tail mass dropped by a ±10 sigma truncation, per side
_TRUNCATION_MASS = 0.5 * math.erfc(TAIL_SIGMAS / _SQRT2)


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class DeltaLimitParams:
    """Coherent amplitude and the multiplier ``K`` of the delta-limit squeezed state."""

    q0: float
    p0: float
    K: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.q0) and math.isfinite(self.p0)):
            raise DomainError("q0 and p0 must be finite")
        if not (math.isfinite(self.K) and self.K > 0):
            raise DomainError(f"K must be positive, got {self.K}")

    def center(self, tau):
        """Drifted centre ``q0 + p0 * tau``."""
        return self.q0 + self.p0 * tau


@dataclass(frozen=True)
class SignCorrelationResult:
    """A D, F or S value with its provenance.

    ``normalized`` marks a genuine probability (taken from a normalized
    state), which must then lie in ``[0, 1]`` up to ``error_estimate``.
    """

    value: float
    method: Method
    error_estimate: float
    normalized: bool

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be nonnegative")
        if self.normalized and not (
            -self.error_estimate <= self.value <= 1.0 + self.error_estimate
        ):
            raise ValueError(f"normalized probability {self.value} outside [0, 1]")


# --- delta-limit closed forms -------------------------------------------------

def w_closed(q, tau, params: DeltaLimitParams):
    """Reduced position density ``K/sqrt(pi) (1+tau^2)^-1/2 exp[-(q-q0(tau))^2/(1+tau^2)]``."""
    width2 = 1.0 + np.square(tau)
    d = np.asarray(q, dtype=float) - params.center(tau)
    out = params.K / SQRT_PI / np.sqrt(width2) * np.exp(-d * d / width2)
    return float(out) if np.ndim(out) == 0 else out


def F_closed(tau, params: DeltaLimitParams):
    """Unnormalized opposite-sign functional of the delta-limit state.

    ``K * [2 sqrt(1+tau^2)/sqrt(pi) exp(-m^2/(1+tau^2)) + 2 m erf(m/sqrt(1+tau^2))]``
    with ``m = q0 + p0 tau``. Works elementwise on arrays of ``tau``.
    """
    a = np.sqrt(1.0 + np.square(tau))
    m = params.center(np.asarray(tau, dtype=float))
    out = params.K * (2.0 * a / SQRT_PI * np.exp(-(m / a) ** 2) + 2.0 * m * erf(m / a))
    return float(out) if np.ndim(out) == 0 else out


def S_closed(tau, params: DeltaLimitParams):
    """Bell combination ``3 F(tau) - F(3 tau)``."""
    tau = np.asarray(tau, dtype=float)
    out = 3.0 * F_closed(tau, params) - F_closed(3.0 * tau, params)
    return float(out) if np.ndim(out) == 0 else out


def S_chained_closed(tau, params: DeltaLimitParams):
    """Four-setting sign chain ``2 F(tau) + F(-tau) - F(3 tau)``.

    With times ``t1, t2 in {3 tau, -tau}`` and D depending on ``t1 + t2`` only,
    every local model satisfies D(3τ,3τ) <= D(3τ,-τ) + D(-τ,3τ) + D(-τ,-τ).
    It reduces to :func:`S_closed` exactly when ``F`` is even in ``tau``.
    """
    tau = np.asarray(tau, dtype=float)
    out = 2.0 * F_closed(tau, params) + F_closed(-tau, params) - F_closed(3.0 * tau, params)
    return float(out) if np.ndim(out) == 0 else out


def F_quadrature(tau: float, params: DeltaLimitParams, rel_tol: float = 1e-12) -> SignCorrelationResult:
    """Brute-force ``2 * int_0^inf q [w(q,tau) + w(-q,tau)] dq``.

    Independent of :func:`F_closed`: only ``w_closed`` is used, and the
    half line is cut at ``|q0(tau)| + 10 * sqrt((1+tau^2)/2)``.
    """
    m = params.center(tau)
    sigma = math.sqrt(0.5 * (1.0 + tau * tau))
    upper = abs(m) + TAIL_SIGMAS * sigma

    def integrand(q):
        return 2.0 * q * (w_closed(q, tau, params) + w_closed(-q, tau, params))

    points = [abs(m)] if 0.0 < abs(m) < upper else None
    res = integrate_1d(integrand, 0.0, upper, abs_tol=0.0, rel_tol=rel_tol, points=points)
    return SignCorrelationResult(res.value, Method.QUADRATURE, res.error_estimate, normalized=False)


# --- finite squeezing ----------------------------------------------------------

def opposite_sign_probability(
    marginal: PositionMarginal, abs_tol: float = 1e-13, rel_tol: float = 1e-11
) -> SignCorrelationResult:
    """Mass of ``{q1 > 0, q2 < 0} ∪ {q1 < 0, q2 > 0}`` under a 2-D Gaussian.

    The inner variable ``q2`` is integrated analytically: conditional on
    ``q1 = x`` it is Gaussian, so its sign probability is an ``erfc``. The
    outer ``q1`` integral is adaptive quadrature over ``mean ± 10 sd``,
    split at 0 and seeded with breakpoints around the place where the
    conditional sign flips.
    """
    mu1, mu2 = (float(v) for v in marginal.mean)
    c = marginal.covariance
    s1, s2 = math.sqrt(c[0, 0]), math.sqrt(c[1, 1])
    slope = c[0, 1] / c[0, 0]
    cond_sd = math.sqrt(c[1, 1] - c[0, 1] * slope)
    norm = 1.0 / (s1 * math.sqrt(2.0 * math.pi))

    def cond_mean(x):
        return mu2 + slope * (x - mu1)

    def outer_pdf(x):
        z = (x - mu1) / s1
        return norm * np.exp(-0.5 * z * z)

    def upper_half(x):
        # q1 = x > 0, need q2 < 0
        return outer_pdf(x) * 0.5 * erfc(cond_mean(x) / (cond_sd * _SQRT2))

    def lower_half(x):
        # q1 = x < 0, need q2 > 0
        return outer_pdf(x) * 0.5 * erfc(-cond_mean(x) / (cond_sd * _SQRT2))

    lo, hi = mu1 - TAIL_SIGMAS * s1, mu1 + TAIL_SIGMAS * s1
    hints = [mu1 + k * s1 for k in (-3.0, -1.0, 0.0, 1.0, 3.0)]
    if slope != 0.0:
        flip = mu1 - mu2 / slope
        width = cond_sd / abs(slope)
        hints += [flip + k * width for k in (-8.0, -4.0, -1.0, 0.0, 1.0, 4.0, 8.0)]
        hints += [k * width for k in (-8.0, -4.0, -1.0, 1.0, 4.0, 8.0)]

    total = 0.0
    err = 2.0 * _TRUNCATION_MASS
    for f, a, b in ((upper_half, max(lo, 0.0), hi), (lower_half, lo, min(hi, 0.0))):
        if a < b:
            res = integrate_1d(f, a, b, abs_tol=abs_tol, rel_tol=rel_tol, points=hints)
            total += res.value
            err += res.error_estimate
    weight = marginal.total_weight
    normalized = abs(marginal.log_weight) < 1e-12
    return SignCorrelationResult(weight * total, Method.QUADRATURE, weight * err, normalized)


def evolved_marginal(t: Union[TimePair, Tuple[float, float]], params: ModePairParams) -> PositionMarginal:
    return marginal_positions(free_evolution(prepared_state(params), as_time_pair(t)))


def F_finite_s(t: Union[TimePair, Tuple[float, float]], params: ModePairParams) -> SignCorrelationResult:
    """Normalized probability that the two positions, measured at ``t1`` and ``t2``, differ in sign."""
    return opposite_sign_probability(evolved_marginal(t, params))


def S_finite_s(tau: float, params: ModePairParams) -> SignCorrelationResult:
    """``3 F(tau, tau) - F(3 tau, 3 tau)`` from normalized probabilities.

    This is a difference of probabilities, not a probability, so the
    result carries ``normalized=False``. Absolute errors add.
    """
    f1 = F_finite_s((tau, tau), params)
    f3 = F_finite_s((3.0 * tau, 3.0 * tau), params)
    return SignCorrelationResult(
        3.0 * f1.value - f3.value,
        Method.QUADRATURE,
        3.0 * f1.error_estimate + f3.error_estimate,
        normalized=False,
    )


def effective_K(tau: float, params: ModePairParams) -> float:
    """The ``K`` that makes the delta-limit ``F`` equal the true probability at ``tau``.

    In the small-squeezing regime this approaches ``s / sqrt(pi)``.
    """
    denom = F_closed(tau, DeltaLimitParams(params.q0, params.p0, 1.0))
    if not (math.isfinite(denom) and denom > 1e-300):
        raise DomainError(f"closed-form F is degenerate at tau={tau}")
    return F_finite_s((tau, tau), params).value / denom


@dataclass(frozen=True)
class AsymmetryScan:
    tau: float
    deltas: List[float]
    values: List[float]
    reference: float
    max_deviation: float


def time_asymmetry_scan(tau: float, deltas: Sequence[float], params: ModePairParams) -> AsymmetryScan:
    """``F`` at ``(tau + d, tau - d)`` for each ``d``; in the delta limit only ``tau`` matters."""
    reference = F_finite_s((tau, tau), params).value
    values = [F_finite_s((tau + d, tau - d), params).value for d in deltas]
    dev = max((abs(v - reference) for v in values), default=0.0)
    return AsymmetryScan(float(tau), [float(d) for d in deltas], values, reference, dev)
