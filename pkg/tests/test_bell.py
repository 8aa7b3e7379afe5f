import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epwbell.bell import (
    DeltaLimitParams,
    F_closed,
    F_finite_s,
    F_quadrature,
    Method,
    S_chained_closed,
    S_closed,
    S_finite_s,
    SignCorrelationResult,
    effective_K,
    evolved_marginal,
    opposite_sign_probability,
    time_asymmetry_scan,
    w_closed,
)
from epwbell.errors import DomainError
from epwbell.numerics import integrate_1d, integrate_2d
from epwbell.phase_space import ModePairParams, PositionMarginal

SQRT_PI = math.sqrt(math.pi)
FIG1 = DeltaLimitParams(1.0, -1.0, 1.0)

# extended-precision quadrature of 2∫ q[w(q)+w(-q)] dq (mpmath, 40 digits)
F_FIG1_TAU0 = 2.100509083320024
S_FIG1_TAU1 = -0.12018747643765719


# --- w(q, tau) -------------------------------------------------------------------

def test_w_peak():
    p = DeltaLimitParams(0.4, 1.1, 2.5)
    tau = 0.7
    assert w_closed(p.center(tau), tau, p) == pytest.approx(2.5 / (SQRT_PI * math.sqrt(1 + tau**2)))


@pytest.mark.parametrize("tau", [0.0, 0.5, 3.0, 12.0])
def test_w_integrates_to_K(tau):
    p = DeltaLimitParams(1.0, -1.0, 3.7)
    sd = math.sqrt(0.5 * (1 + tau**2))
    c = p.center(tau)
    res = integrate_1d(lambda q: w_closed(q, tau, p), c - 10 * sd, c + 10 * sd)
    assert res.value == pytest.approx(3.7, rel=1e-12)


def test_w_at_origin_time():
    p = DeltaLimitParams(0.0, 2.0, 1.5)
    q = np.linspace(-3, 3, 13)
    assert np.allclose(w_closed(q, 0.0, p), 1.5 / SQRT_PI * np.exp(-q * q), rtol=1e-14)


# --- F(tau) --------------------------------------------------------------------------

def test_F_centered_state():
    p = DeltaLimitParams(0.0, 0.0, 2.0)
    for tau in (0.0, 0.3, 4.0):
        assert F_closed(tau, p) == pytest.approx(4.0 * math.sqrt(1 + tau**2) / SQRT_PI, rel=1e-15)


def test_F_fig1_at_zero():
    assert F_closed(0.0, FIG1) == pytest.approx(F_FIG1_TAU0, rel=1e-14)
    assert F_quadrature(0.0, FIG1).value == pytest.approx(F_FIG1_TAU0, rel=1e-12)
    assert F_FIG1_TAU0 == pytest.approx(2 / SQRT_PI * math.exp(-1) + 2 * math.erf(1), rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(q0=st.floats(-3, 3), p0=st.floats(-3, 3), tau=st.floats(-5, 5), K=st.floats(0.01, 50))
def test_F_closed_equals_quadrature(q0, p0, tau, K):
    p = DeltaLimitParams(q0, p0, K)
    assert F_closed(tau, p) == pytest.approx(F_quadrature(tau, p).value, rel=1e-8)


def test_K_on_both_terms():
    # K on the first term alone disagrees with the quadrature whenever q0(tau) != 0
    p = DeltaLimitParams(1.0, 0.0, 5.0)
    a = math.sqrt(2.0)
    first_only = 2 * 5.0 * a / SQRT_PI * math.exp(-0.5) + 2 * math.erf(1 / a)
    quad = F_quadrature(1.0, p).value
    assert quad == pytest.approx(F_closed(1.0, p), rel=1e-10)
    assert abs(quad - first_only) > 1.0


@settings(max_examples=60, deadline=None)
@given(q0=st.floats(-3, 3), p0=st.floats(-3, 3), tau=st.floats(-5, 5), c=st.floats(0.01, 100))
def test_linear_in_K(q0, p0, tau, c):
    base = DeltaLimitParams(q0, p0, 1.0)
    scaled = DeltaLimitParams(q0, p0, c)
    assert F_closed(tau, scaled) == pytest.approx(c * F_closed(tau, base), rel=1e-13)
    s1, sc = S_closed(tau, base), S_closed(tau, scaled)
    assert sc == pytest.approx(c * s1, rel=1e-12, abs=1e-12 * c)
    if abs(s1) > 1e-9:
        assert math.copysign(1, sc) == math.copysign(1, s1)


@settings(max_examples=60, deadline=None)
@given(q0=st.floats(-3, 3), p0=st.floats(-3, 3), tau=st.floats(-20, 20))
def test_F_nonnegative(q0, p0, tau):
    assert F_closed(tau, DeltaLimitParams(q0, p0)) >= 0


@pytest.mark.parametrize("p0", [-2.0, -0.5, 0.7, 1.5])
def test_F_grows_without_bound(p0):
    p = DeltaLimitParams(0.3, p0)
    slope = 2 / SQRT_PI * math.exp(-p0 * p0) + 2 * p0 * math.erf(p0)
    taus = np.array([1e2, 1e3, 1e4])
    ratios = F_closed(taus, p) / taus
    assert np.all(np.abs(ratios - slope) < [0.2, 0.02, 0.002])
    late = F_closed(np.linspace(10, 1000, 200), p)
    assert np.all(np.diff(late) > 0)


# --- S(tau) ---------------------------------------------------------------------------

def test_S_at_zero():
    assert S_closed(0.0, FIG1) == pytest.approx(2 * F_closed(0.0, FIG1), rel=1e-15)
    assert S_closed(0.0, FIG1) > 0


def test_S_symmetric_identity():
    p = DeltaLimitParams(0.0, 0.0, 1.3)
    taus = np.linspace(0, 20, 2001)
    expected = 2 * 1.3 / SQRT_PI * (3 * np.sqrt(1 + taus**2) - np.sqrt(1 + 9 * taus**2))
    got = S_closed(taus, p)
    assert np.allclose(got, expected, rtol=1e-13)
    assert np.all(got >= 0)


def test_S_fig1_value_and_negativity():
    assert S_closed(1.0, FIG1) == pytest.approx(S_FIG1_TAU1, rel=1e-12)
    # cross-check with quadrature on both terms
    quad = 3 * F_quadrature(1.0, FIG1).value - F_quadrature(3.0, FIG1).value
    assert quad == pytest.approx(S_FIG1_TAU1, abs=1e-10)
    assert S_closed(np.linspace(0, 5, 501), FIG1).min() < 0


def test_chained_combination_nonnegative(rng):
    taus = np.linspace(-20, 20, 801)
    for q0, p0 in rng.uniform(-4, 4, size=(200, 2)):
        assert S_chained_closed(taus, DeltaLimitParams(q0, p0)).min() >= -1e-12
    # equal to S when F is even in tau
    p = DeltaLimitParams(0.0, 0.0)
    assert np.allclose(S_chained_closed(taus, p), S_closed(taus, p), rtol=1e-13)


# --- opposite-sign probability ---------------------------------------------------------

def test_centered_uncorrelated_half():
    m = PositionMarginal([0, 0], np.eye(2) * 2.3)
    r = opposite_sign_probability(m)
    assert r.value == pytest.approx(0.5, abs=1e-12) and r.normalized
    m = PositionMarginal([0, 0], np.eye(2), log_weight=math.log(3.0))
    r = opposite_sign_probability(m)
    assert r.value == pytest.approx(1.5, abs=1e-11) and not r.normalized


def test_anticorrelated_against_monte_carlo_and_arcsine():
    rho = -0.9
    m = PositionMarginal([0, 0], [[1, rho], [rho, 1]])
    value = opposite_sign_probability(m).value
    # Monte Carlo oracle, 10^7 samples
    gen = np.random.default_rng(7)
    n = 10_000_000
    x = gen.standard_normal(n)
    y = rho * x + math.sqrt(1 - rho * rho) * gen.standard_normal(n)
    frac = np.mean((x >= 0) != (y >= 0))
    se = math.sqrt(frac * (1 - frac) / n)
    assert value > 0.5
    assert abs(value - frac) < 5 * se
    # orthant identity P(opposite) = 1/2 - arcsin(rho)/pi
    assert value == pytest.approx(0.5 - math.asin(rho) / math.pi, abs=1e-12)


def test_far_positive_is_zero():
    m = PositionMarginal([5, 5], np.eye(2) * 1e-3)
    assert opposite_sign_probability(m).value < 1e-10


@pytest.mark.parametrize("mean,cov", [
    ([0.3, -0.8], [[1.0, 0.4], [0.4, 2.0]]),
    ([1.2, 0.5], [[0.5, -0.3], [-0.3, 0.7]]),
    ([-0.4, 0.1], [[2.0, 1.9], [1.9, 2.0]]),
])
def test_against_pure_2d_quadrature(mean, cov):
    m = PositionMarginal(mean, cov)
    sd = np.sqrt(np.diag(cov))

    def f(x, y):
        return m.density(np.stack([np.full_like(y, x), y], -1))

    lo = np.array(mean) - 10 * sd
    hi = np.array(mean) + 10 * sd
    quad = 0.0
    if hi[0] > 0 and lo[1] < 0:
        quad += integrate_2d(f, (max(lo[0], 0), hi[0]), (lo[1], min(hi[1], 0)), abs_tol=1e-12).value
    if lo[0] < 0 and hi[1] > 0:
        quad += integrate_2d(f, (lo[0], min(hi[0], 0)), (max(lo[1], 0), hi[1]), abs_tol=1e-12).value
    assert opposite_sign_probability(m).value == pytest.approx(quad, abs=1e-10)


# --- finite squeezing -------------------------------------------------------------------

def test_far_displaced_relative_coordinate_separates_signs():
    # q = (q1 - q2)/√2 displaced far positive puts q1 > 0 > q2
    r = F_finite_s((0.0, 0.0), ModePairParams(12.0, 0.0, 1.0))
    assert 1.0 - r.value < 1e-12
    r = F_finite_s((0.0, 0.0), ModePairParams(-12.0, 0.0, 1.0))
    assert 1.0 - r.value < 1e-12


def test_symmetric_product_state_half():
    r = F_finite_s((0.0, 0.0), ModePairParams(0.0, 0.0, 1.0))
    assert r.value == pytest.approx(0.5, abs=1e-12)
    assert r.method is Method.QUADRATURE and r.normalized


def test_small_s_approaches_delta_limit():
    taus = np.linspace(0, 2, 21)
    devs = []
    for s in (0.1, 0.05, 0.02):
        p = ModePairParams(1.0, -1.0, s)
        ratio = [F_finite_s((t, t), p).value * SQRT_PI / s / F_closed(t, FIG1) for t in taus]
        devs.append(max(abs(r - 1) for r in ratio))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 2e-3


def test_S_finite_at_zero():
    p = ModePairParams(1.0, -1.0, 0.3)
    assert S_finite_s(0.0, p).value == pytest.approx(2 * F_finite_s((0, 0), p).value, abs=1e-14)


@pytest.mark.parametrize("s", [1.0, 0.3, 0.05])
def test_S_finite_symmetric_state_nonnegative(s):
    p = ModePairParams(0.0, 0.0, s)
    for tau in np.linspace(0, 10, 21):
        assert S_finite_s(float(tau), p).value >= -1e-12


def test_S_result_is_not_a_probability():
    r = S_finite_s(1.5, ModePairParams(1.0, -1.0, 0.1))
    assert not r.normalized and r.error_estimate > 0


@pytest.mark.parametrize("s", [0.1, 0.02])
def test_effective_K_matches_delta_weight_early(s):
    p = ModePairParams(1.0, -1.0, s)
    assert effective_K(0.0, p) == pytest.approx(s / SQRT_PI, rel=0.01)


def test_effective_K_decreases_at_late_times():
    p = ModePairParams(1.0, -1.0, 0.1)
    taus = np.linspace(10, 40, 7)
    k = [effective_K(float(t), p) for t in taus]
    assert np.all(np.diff(k) < 0)


def test_effective_K_converges_as_s_shrinks():
    errs = [abs(effective_K(2.0, ModePairParams(1.0, -1.0, s)) * SQRT_PI / s - 1)
            for s in (0.1, 0.05, 0.02, 0.01)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_time_asymmetry_scan():
    p = ModePairParams(1.0, -1.0, 0.5)
    scan = time_asymmetry_scan(1.0, [0.0, 0.5, 1.0], p)
    assert scan.values[0] == scan.reference == F_finite_s((1.0, 1.0), p).value
    assert scan.max_deviation > 0
    assert time_asymmetry_scan(1.0, [], p).max_deviation == 0.0


def test_time_asymmetry_vanishes_in_delta_limit():
    devs = []
    for s in (0.5, 0.1, 0.02):
        scan = time_asymmetry_scan(1.0, [0.5, 1.0], ModePairParams(1.0, -1.0, s))
        devs.append(scan.max_deviation / scan.reference)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-3


def test_marginal_pipeline_normalized():
    for s in (1.0, 0.1, 0.02):
        for t in ((0, 0), (10, 10), (10, 0), (3, 7)):
            m = evolved_marginal(t, ModePairParams(1.0, -1.0, s))
            assert m.log_weight == 0.0
            r = F_finite_s(t, ModePairParams(1.0, -1.0, s))
            assert 0.0 <= r.value <= 1.0


def test_result_invariants():
    with pytest.raises(ValueError):
        SignCorrelationResult(1.2, Method.QUADRATURE, 0.01, normalized=True)
    with pytest.raises(ValueError):
        SignCorrelationResult(0.2, Method.QUADRATURE, -0.01, normalized=False)
    SignCorrelationResult(1.005, Method.MONTE_CARLO, 0.01, normalized=True)


def test_delta_params_validation():
    with pytest.raises(DomainError):
        DeltaLimitParams(0, 0, 0.0)
    with pytest.raises(DomainError):
        ModePairParams(0, 0, -1.0)
