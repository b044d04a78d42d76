import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fractm.errors import DomainError, EvaluationError, RegimeError
from fractm.measure import (
    QuadratureRule,
    WeightParams,
    ball_volume,
    gamma_fn,
    integrate_weighted,
    norm_grad_lp_alpha,
    norm_lq_theta,
    omega,
)
from fractm.profiles import RadialGrid, RadialProfile, make_moser, moser_value, tent


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (0.5, math.sqrt(math.pi)), (5.0, 24.0)])
def test_gamma_known_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-14)


@given(st.floats(min_value=1e-6, max_value=50.0))
def test_gamma_matches_extended_precision(x):
    ref = float(mpmath.gamma(mpmath.mpf(x)))
    assert abs(gamma_fn(x) - ref) <= 1e-12 * ref


@pytest.mark.parametrize("x", [0.0, -1.0, float("nan"), float("inf")])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


@pytest.mark.parametrize("theta, expected", [(0, 2.0), (1, 2 * math.pi), (2, 4 * math.pi)])
def test_omega_low_dimensions(theta, expected):
    assert abs(omega(theta) - expected) <= 1e-12 * expected


def test_omega_matches_sphere_area_in_integer_dimension():
    # surface area of the unit sphere in R^4 is 2 pi^2
    assert omega(3) == pytest.approx(2 * math.pi**2, rel=1e-14)


def test_omega_rejects_negative_theta():
    with pytest.raises(DomainError):
        omega(-0.5)


@pytest.mark.parametrize("radius", [0.1, 1.0, 3.7, 10.0])
@pytest.mark.parametrize("theta", [0.0, 0.5, 1.0, 2.0, 3.3])
def test_ball_volume_against_direct_integration(radius, theta):
    ref, _ = integrate.quad(lambda r: omega(theta) * r**theta, 0.0, radius, epsabs=0, epsrel=1e-13)
    assert abs(ball_volume(radius, theta) - ref) <= 1e-10 * ref


def test_weight_params_derived_quantities():
    prm = WeightParams(2.0, 1.0)
    assert prm.alpha == 1.0 and prm.k0 == 1
    assert abs(prm.mu_star - 4 * math.pi) <= 1e-12 * 4 * math.pi
    assert WeightParams(2.5, 0.0).k0 == 2
    assert WeightParams(3.0, 0.0).k0 == 2
    assert WeightParams(3.0, 2.0).integer_regime and not WeightParams(2.5, 2.0).integer_regime


@given(st.floats(2.0, 8.0), st.floats(0.0, 10.0))
def test_weight_params_invariants(p, theta):
    prm = WeightParams(p, theta)
    assert prm.k0 >= p - 1 > prm.k0 - 1
    assert prm.mu_star > 0
    assert prm.fact_pm1() == pytest.approx(math.gamma(p))


@pytest.mark.parametrize(
    "kwargs, exc",
    [({"p": 1.5, "theta": 1.0}, DomainError), ({"p": 2.0, "theta": -1.0}, DomainError), ({"p": 2.0, "theta": 1.0, "alpha": 2.0}, RegimeError)],
)
def test_weight_params_rejects_bad_input(kwargs, exc):
    with pytest.raises(exc):
        WeightParams(**kwargs)


def _unit_rule(order=8):
    return RadialGrid.log_uniform(256, 1e-10, 1.0).rule(order)


def test_integrate_constant_gives_ball_volume():
    assert integrate_weighted(lambda r: np.ones_like(r), _unit_rule(), 1.0) == pytest.approx(math.pi, rel=1e-12)


def test_integrate_linear_in_dimension_one():
    assert integrate_weighted(lambda r: r, _unit_rule(), 0.0) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("theta", [0.0, 0.5, 1.0, 4.0])
def test_integrate_constant_on_declared_lattice(theta):
    rule = RadialGrid.log_uniform(128, 1e-6, 7.0).rule()
    got = integrate_weighted(lambda r: np.ones_like(r), rule, theta)
    assert abs(got - ball_volume(7.0, theta)) <= 1e-10 * ball_volume(7.0, theta)


def test_integrate_reports_offending_radius():
    with pytest.raises(EvaluationError) as err:
        integrate_weighted(lambda r: np.where(r > 0.5, np.inf, 1.0), _unit_rule(), 1.0)
    assert err.value.radius > 0.5


def test_integrate_moser_square_against_extended_precision():
    prm = WeightParams(2.0, 1.0)
    u = make_moser(5, prm)
    got = integrate_weighted(lambda r: moser_value(r, 5, prm) ** 2, u.grid.rule(), 1.0)
    knee = math.exp(-2.5)
    mpmath.mp.dps = 30
    f = lambda r: float(moser_value(float(r), 5, prm)) ** 2 * r
    ref = 2 * mpmath.pi * (mpmath.quad(f, [0, knee]) + mpmath.quad(f, [knee, 1]))
    assert abs(got - float(ref)) <= 1e-8 * float(ref)


def test_nested_refinement_converges():
    # doubling the panel order on the same cells changes nothing beyond rounding
    prm = WeightParams(3.0, 0.7)
    u = make_moser(7, prm)
    vals = [norm_lq_theta(u, 3.0, 0.7, order) for order in (4, 8, 16, 32)]
    assert abs(vals[-1] - vals[-2]) <= 1e-13 * vals[-1]
    assert abs(vals[1] - vals[-1]) <= 1e-10 * vals[-1]


def test_norm_of_zero_profile_is_zero():
    grid = RadialGrid.log_uniform(32, 1e-4, 2.0)
    z = RadialProfile(grid, np.zeros(32))
    assert norm_lq_theta(z, 2.0, 1.0) == 0.0
    assert norm_grad_lp_alpha(z, WeightParams(2.0, 1.0)) == 0.0


def test_norm_of_cap_profile_is_ball_volume():
    # u = 1 on (0, 1] (steep drop to zero right after 1)
    nodes = np.concatenate([np.geomspace(1e-8, 1.0, 64), [1.0 + 1e-12]])
    u = RadialProfile(RadialGrid(nodes), np.concatenate([np.ones(64), [0.0]]))
    assert norm_lq_theta(u, 2.0, 1.0) == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_norm_rejects_q_below_one():
    grid = RadialGrid.log_uniform(32, 1e-4, 2.0)
    with pytest.raises(DomainError):
        norm_lq_theta(tent(grid), 0.5, 1.0)


def test_moser_l2_norm_against_antiderivative():
    # u = c (ln 1/r) on (k, 1): int r ln^2(1/r) dr = [r^2/4 (2 ln^2 r - 2 ln r + 1)]
    prm = WeightParams(2.0, 1.0)
    n = 10
    u = make_moser(n, prm)
    k = math.exp(-n / 2)
    cap2 = (n / 2) / (2 * math.pi)
    slope2 = (2 / n) / (2 * math.pi)
    F = lambda r: r**2 / 4 * (2 * math.log(r) ** 2 - 2 * math.log(r) + 1)
    ref = 2 * math.pi * (cap2 * k**2 / 2 + slope2 * (F(1.0) - F(k)))
    assert norm_lq_theta(u, 2.0, 1.0) ** 2 == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("n", [1, 3, 17, 50])
def test_moser_gradient_norm_is_one(n):
    prm = WeightParams(2.0, 1.0)
    assert norm_grad_lp_alpha(make_moser(n, prm), prm) == pytest.approx(1.0, abs=1e-12)


def test_tent_gradient_norm_converges_to_exact_value():
    # u = 1 - r is not log-linear, so the sampled profile carries an O(h^2) error
    prm = WeightParams(2.0, 1.0)
    errs = []
    for n_nodes in (512, 2048):
        g = RadialGrid.log_uniform(n_nodes, 1e-10, 1.0)
        errs.append(abs(norm_grad_lp_alpha(tent(g), prm) - math.sqrt(math.pi)))
    assert errs[0] <= 1e-3 * math.sqrt(math.pi)
    assert errs[1] <= errs[0] / 10


def test_quadrature_rule_validation():
    with pytest.raises(DomainError):
        QuadratureRule([1.0])
    with pytest.raises(DomainError):
        QuadratureRule([0.0, 1.0])
    with pytest.raises(DomainError):
        QuadratureRule([1.0, 0.5])
    rule = QuadratureRule([0.1, 1.0, 2.0], panel_order=4)
    assert rule.refined().panel_order == 8 and rule.r_min_cutoff == 0.1
