import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fractm.errors import ConstraintError, DomainError
from fractm.functionals import (
    critical_objective,
    evaluate,
    exp_tail,
    identity_ratio,
    log_exp_tail,
    log_tm_integral,
    phi_p,
    phi_p_prime,
    subcritical_objective,
    tm_integral,
)
from fractm.measure import WeightParams, full_norm, norm_grad_lp_alpha, norm_lq_theta
from fractm.profiles import (
    RadialGrid,
    RadialProfile,
    bump,
    default_grid,
    make_ishiwata,
    make_moser,
    normalize_subcritical,
    rescale,
    tent,
    unit_full_norm,
)
from fractm.verify import log_moser_cap_integral, moser_cap_integral, moser_lp_closed_form

P21 = WeightParams(2.0, 1.0)


def series_oracle(t, k):
    # sum_{j >= k} t^j / j! = e^t P(k, t) with P the regularized lower incomplete gamma
    mpmath.mp.dps = 40
    t = mpmath.mpf(t)
    if k == 0:
        return mpmath.exp(t)
    return mpmath.exp(t) * mpmath.gammainc(k, 0, t, regularized=True)


@pytest.mark.parametrize(
    "p, t, expected",
    [(2.0, 1.0, math.e - 1), (3.0, 0.0, 0.0), (2.5, 2.0, math.exp(2) - 3)],
)
def test_phi_examples(p, t, expected):
    assert phi_p(t, WeightParams(p, 0.0)) == pytest.approx(expected, rel=1e-14, abs=0)


@given(st.floats(0.0, 700.0), st.integers(0, 6))
@settings(max_examples=300)
def test_exp_tail_against_extended_precision(t, k):
    ref = series_oracle(t, k)
    got = float(exp_tail(np.array([t]), k)[0])
    ref = float(ref)
    if ref < 1e-290:  # below double range, only underflow matters
        assert 0 <= got <= 1e-280
    else:
        assert abs(got - ref) <= 1e-13 * ref


@given(st.floats(1e-300, 1e4), st.integers(0, 6))
@settings(max_examples=300)
def test_log_exp_tail_against_extended_precision(t, k):
    ref = mpmath.log(series_oracle(t, k))
    got = float(log_exp_tail(np.array([t]), k)[0])
    assert abs(got - float(ref)) <= 1e-12 * max(1.0, abs(float(ref)))


def test_phi_properties():
    t = np.linspace(0, 50, 2001)
    for p in (2.0, 2.5, 3.0, 4.2):
        prm = WeightParams(p, 0.0)
        v = phi_p(t, prm)
        assert v[0] == 0.0 and np.all(np.diff(v) > 0)
        h = 1e-6
        fd = (phi_p(10 + h, prm) - phi_p(10 - h, prm)) / (2 * h)
        assert phi_p_prime(10.0, prm) == pytest.approx(fd, rel=1e-7)
    with pytest.raises(DomainError):
        phi_p(-1e-3, P21)


def test_tm_integral_zero_exponent():
    assert tm_integral(make_moser(3, P21), 0.0, P21) == 0.0
    with pytest.raises(DomainError):
        tm_integral(make_moser(3, P21), -1.0, P21)


@pytest.mark.parametrize("mu", [0.5, 2.0, 8.0])
def test_exp_estimate_for_small_caps(mu):
    # constant c on (0, 1] (steep drop after), with mu c^2 <= 1
    c = 1.0 / math.sqrt(mu)
    nodes = np.concatenate([np.geomspace(1e-8, 1.0, 64), [1.0 + 1e-9]])
    u = RadialProfile(RadialGrid(nodes), np.concatenate([np.full(64, c), [0.0]]))
    assert tm_integral(u, mu, P21) <= math.exp(mu) * norm_lq_theta(u, 2, 1) ** 2


@pytest.mark.parametrize("params", [WeightParams(2, 1), WeightParams(3, 2), WeightParams(2.5, 0.5)])
@pytest.mark.parametrize("n", [5, 20, 40])
def test_moser_integral_dominates_cap_term(params, n):
    mu = 1.2 * params.mu_star
    u = make_moser(n, params)
    got = tm_integral(u, mu, params)
    assert got >= moser_cap_integral(n, mu, params)
    # dropping the (mu/mu*)^j factors in the partial sum gives a smaller bound still
    x = mu / params.mu_star
    partial = sum(n**j / math.factorial(j) for j in range(params.k0))
    assert got >= params.omega_theta / (params.theta + 1) * (math.exp((x - 1) * n) - partial * math.exp(-n))


def test_log_domain_path_matches_direct_path():
    u = make_moser(30, P21)
    mu = 1.5 * P21.mu_star  # exponents up to 45
    assert log_tm_integral(u, mu, P21) == pytest.approx(math.log(tm_integral(u, mu, P21)), rel=1e-13)
    big = make_moser(500, P21, RadialGrid.log_uniform(512, 1e-120, 10.0, focus=math.exp(-250)))
    rep = evaluate(big, 2.0 * P21.mu_star, P21, kind="critical")
    assert rep.overflow_flag and math.isfinite(rep.tm_integral)
    # the cap alone contributes about (2 - 1) * 500 in log scale
    assert rep.tm_integral >= log_moser_cap_integral(500, 2.0 * P21.mu_star, P21)
    assert rep.tm_integral == pytest.approx(log_moser_cap_integral(500, 2.0 * P21.mu_star, P21), rel=1e-3)


def test_subcritical_objective_cases():
    u = normalize_subcritical(make_moser(4, P21), P21)
    assert subcritical_objective(u, 0.0, P21) == 0.0
    assert subcritical_objective(u, 3.0, P21) == pytest.approx(tm_integral(u, 3.0, P21), rel=1e-12)
    with pytest.raises(DomainError):
        subcritical_objective(RadialProfile(u.grid, np.zeros(u.grid.size)), 1.0, P21)
    with pytest.raises(ConstraintError):
        subcritical_objective(rescale(u, 1.01, 1.0), 1.0, P21)


@given(st.integers(0, 500), st.floats(0.01, 0.99), st.sampled_from([2.0, 3.0, 4.0]))
@settings(max_examples=40, deadline=None)
def test_bi_normalized_objective_exceeds_leading_term(seed, frac, p):
    # integer p only: then k0 p/(p-1) = p and the leading term is mu^k0/k0! ||u||^p
    prm = WeightParams(p, 1.0)
    rng = np.random.default_rng(seed)
    grid = RadialGrid.log_uniform(48, 1e-4, 5.0)
    vals = np.concatenate([np.cumsum(rng.exponential(1, 47)[::-1])[::-1], [0]])
    u = normalize_subcritical(RadialProfile(grid, vals), prm)
    mu = frac * prm.mu_star
    assert subcritical_objective(u, mu, prm) > mu**prm.k0 / math.factorial(prm.k0)


def test_critical_objective_cases():
    u = unit_full_norm(tent(default_grid()), P21)
    assert critical_objective(u, 0.0, P21) == 0.0
    with pytest.raises(ConstraintError):
        critical_objective(rescale(u, 1.001, 1.0), 1.0, P21)


def test_vanishing_family_approaches_sigma():
    sigma = 0.3 * P21.mu_star
    base = unit_full_norm(tent(default_grid()), P21)
    vals = [critical_objective(make_ishiwata(t, base, P21), sigma, P21) for t in (0.2, 0.1, 0.05, 0.02)]
    gaps = [abs(v - sigma) for v in vals]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    # a cubic through the four points extrapolates to sigma at t = 0
    extrap = np.polyval(np.polyfit([0.2, 0.1, 0.05, 0.02], vals, 3), 0.0)
    assert abs(extrap - sigma) < 0.05 * gaps[-1]


def test_vanishing_family_second_order_bound():
    # phi_2(x) >= x + x^2/2 gives the two-term lower bound
    sigma, t = 0.5 * P21.mu_star, 0.25
    base = unit_full_norm(tent(default_grid()), P21)
    v = make_ishiwata(t, base, P21)
    g = norm_grad_lp_alpha(base, P21) ** 2
    l2 = norm_lq_theta(base, 2, 1) ** 2
    l4 = norm_lq_theta(base, 4, 1) ** 4
    xi2 = 1.0 / (t * g + l2)
    bound = sigma * (xi2 * l2 + sigma / 2 * xi2**2 * l4 * t)
    assert critical_objective(v, sigma, P21) >= bound - 1e-6


@pytest.mark.parametrize(
    "mu, sigma, p, expected",
    [(0.5, 1.0, 2.0, 1.0), (0.25, 1.0, 2.0, 3.0), (0.5**0.5, 1.0, 3.0, 1.0)],
)
def test_identity_ratio_examples(mu, sigma, p, expected):
    assert identity_ratio(mu, sigma, WeightParams(p, 1.0)) == pytest.approx(expected, rel=1e-12)


def test_identity_ratio_limits_and_errors():
    assert 0 < identity_ratio(1 - 1e-9, 1.0, P21) < 1e-8
    for mu in (0.0, 1.0, 1.5):
        with pytest.raises(DomainError):
            identity_ratio(mu, 1.0, P21)


@given(st.integers(0, 300), st.floats(0.0, 1.0), st.sampled_from(["critical", "subcritical"]))
@settings(max_examples=30, deadline=None)
def test_report_invariants(seed, frac, kind):
    rng = np.random.default_rng(seed)
    grid = RadialGrid.log_uniform(40, 1e-5, 3.0)
    u = RadialProfile(grid, np.concatenate([np.cumsum(rng.exponential(1, 39)[::-1])[::-1], [0]]))
    u = unit_full_norm(u, P21)
    rep = evaluate(u, frac * P21.mu_star, P21, kind)
    assert rep.grad_norm_p >= 0 and rep.lp_theta_norm >= 0 and rep.tm_integral >= 0
    assert rep.full_norm**2 == pytest.approx(rep.grad_norm_p**2 + rep.lp_theta_norm**2, rel=1e-10)
    assert rep.full_norm == pytest.approx(full_norm(u, P21), rel=1e-12)


def test_moser_norm_closed_form_oracle_agrees_with_gamma_function():
    from scipy.special import gammainc

    for prm in (WeightParams(2, 1), WeightParams(3, 2), WeightParams(2.5, 0.0)):
        c = prm.omega_theta / (prm.omega_alpha * (prm.theta + 1) ** prm.p)
        for n in (1, 10, 50):
            alt = c / n * (n**prm.p * math.exp(-n) + math.gamma(prm.p + 1) * gammainc(prm.p + 1, n))
            assert moser_lp_closed_form(n, prm) == pytest.approx(alt, rel=1e-12)
