import math

import numpy as np
import pytest

from fractm.errors import DomainError
from fractm.measure import WeightParams
from fractm.verify import (
    CheckResult,
    check_bounded_below_sharp,
    check_exp_estimate,
    check_identity_transform,
    check_convexity_splitting,
    check_moser_asymptotics,
    check_phi_conj,
    check_phi_homogeneity,
    check_phi_monotone_sigma,
    check_radial_decay,
    check_scaling_laws,
    check_sharpness_blowup,
    check_small_sigma_value,
    check_tmsc_continuity,
    convexity_deficit,
    format_manifest,
    moser_limit,
    phi_conj_constant,
    run_suite,
    sharpness_sequences,
)

P21 = WeightParams(2.0, 1.0)


def _consistent(r: CheckResult):
    assert r.passed, r.details
    assert r.worst_violation <= r.tolerance


def test_convexity_special_cases():
    # y = 0 reduces to (1+eps)^{(q-1)/q} >= 1
    assert convexity_deficit(2.0, 0.0, 3.0, 0.5) <= 0
    # x = 0, q = 2, eps = 3: (1 - 1/2)^{-1} y^2 = 2 y^2 >= y^2
    assert convexity_deficit(0.0, 1.5, 2.0, 3.0) == pytest.approx(1.5**2 - 2 * 1.5**2)


@pytest.mark.parametrize(
    "check", [check_convexity_splitting, check_phi_homogeneity, check_exp_estimate, check_phi_monotone_sigma]
)
def test_sampling_suites_pass(check):
    r = check(20_000, 11)
    _consistent(r)
    assert r.samples == 20_000 and "log-uniform" in r.details


def test_sampling_suites_are_deterministic():
    a, b = check_phi_homogeneity(5000, 3), check_phi_homogeneity(5000, 3)
    assert a == b


def test_scaling_laws():
    r = check_scaling_laws(100, 2)
    _consistent(r)
    _consistent(check_scaling_laws(50, 3, WeightParams(3.0, 2.5)))
    with pytest.raises(DomainError):
        check_scaling_laws(0)


def test_phi_conj_constant_matches_small_t_limit():
    # the ratio tends to mu/(k0+1) as t -> 0 and decays for large t
    for p, mu in ((2.0, 3.0), (3.0, 5.0)):
        k0 = math.ceil(p - 1)
        assert phi_conj_constant(p, mu) == pytest.approx(1.01 * mu / (k0 + 1), rel=1e-4)
    _consistent(check_phi_conj(samples=2000))


@pytest.mark.parametrize("params", [WeightParams(2, 1), WeightParams(3, 2), WeightParams(2, 0)])
def test_moser_asymptotics(params):
    r = check_moser_asymptotics(50, params)
    _consistent(r)
    prod = r.data["n_times_lp"]
    assert abs(prod[-1] / prod[-2] - 1) <= 0.02
    assert prod[-1] == pytest.approx(moser_limit(params), rel=0.05)


def test_blowup_slope_and_tau():
    sigma = 1.05 * P21.mu_star
    r = check_sharpness_blowup(sigma, 60, P21)
    # the exponent grows like (sigma/mu* - 1) n = 0.05 n
    assert r.data["slope"] >= 0.04
    tau = np.array(r.data["tau"])
    # increasing from n = 2 on, with 1 - tau_n ~ n^{-1} lim(n ||u_n||^p) / p
    assert np.all(np.diff(tau[1:]) >= 0)
    assert 50 * (1 - tau[49]) == pytest.approx(moser_limit(P21) / 2, rel=0.05)
    assert np.all(np.array(r.data["log_subcritical"])[1:] > np.array(r.data["log_subcritical"])[:-1])


def test_blowup_passes_well_above_sharp_exponent():
    r = check_sharpness_blowup(1.2 * P21.mu_star, 60, P21)
    assert r.passed and r.data["n0"] <= 40


def test_blowup_requires_supercritical_exponent():
    with pytest.raises(DomainError):
        check_sharpness_blowup(0.9 * P21.mu_star, 60, P21)


def test_bounded_below_sharp_exponent():
    _consistent(check_bounded_below_sharp(0.9 * P21.mu_star, 60, P21))
    crit, _, _ = sharpness_sequences(0.5 * P21.mu_star, range(1, 61), P21)
    assert np.exp(crit).max() < 10


def test_radial_decay():
    _consistent(check_radial_decay(50, 1, P21))


def test_identity_transform_check(small_cfg):
    _consistent(check_identity_transform(P21, small_cfg))


def test_tmsc_continuity_shrinking_differences(small_cfg):
    r = check_tmsc_continuity((0.1, 0.05, 0.025), P21, small_cfg, s_range=(0.2, 0.4))
    _consistent(r)
    d = r.data["diffs"]
    assert d[0] > d[1] > d[2]
    assert check_tmsc_continuity((0.0,), P21, small_cfg).worst_violation == 0.0


def test_small_sigma_value(small_cfg):
    r = check_small_sigma_value([0.0, 0.05 * P21.mu_star], P21, small_cfg)
    _consistent(r)
    assert "sigma=0:" in r.details
    with pytest.raises(DomainError):
        check_small_sigma_value([1.0], WeightParams(3.0, 1.0), small_cfg)


def test_manifest_format():
    rs = [CheckResult("b", True, 0.0, 3, "x", 0.0, "anchor b"), CheckResult("a", False, 0.5, 1, "y", 0.1, "anchor a")]
    text = format_manifest(rs)
    lines = text.strip().split("\n")
    assert lines[0].split("\t")[:4] == ["name", "anchor", "status", "worst_violation"]
    assert lines[1].startswith("b\tanchor b\tPASS") and lines[2].startswith("a\tanchor a\tFAIL")


def test_quick_suite_passes_and_is_sorted():
    rs = run_suite("quick", 5)
    assert [r.name for r in rs] == sorted(r.name for r in rs)
    for r in rs:
        _consistent(r)
    with pytest.raises(DomainError):
        run_suite("nope")
