"""Runnable property suites for the inequalities, scaling laws and families.

Each check returns a :class:`CheckResult`.  Sampling checks draw their
variables log-uniformly from declared ranges and record those ranges in
``details``.  Inequalities are tested in the form ``lhs - rhs <= slack``;
where both sides can be far from unit size the deficit is measured against
``max(1, |rhs|)`` so the slack stays above double-precision resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError
from .functionals import critical_objective, log_exp_tail, phi_p, subcritical_objective
from .measure import WeightParams, full_norm, norm_grad_lp_alpha, norm_lq_theta
from .optimize import (
    OptimizerConfig,
    _ishiwata_search,
    _tmsc_cached,
    identity_transform,
    maximize_tmc,
    tau_corrected_moser,
)
from .profiles import (
    RadialGrid,
    RadialProfile,
    bump,
    make_moser,
    radial_decay_constant,
    radial_decay_ratio,
    rescale,
    unit_full_norm,
)

INEQ_SLACK = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_violation: float
    samples: int
    details: str
    tolerance: float = 0.0
    anchor: str = ""
    data: dict = field(default_factory=dict, repr=False)


def _loguniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _scaled_deficit(lhs, rhs):
    return (lhs - rhs) / np.maximum(1.0, np.abs(rhs))


def _sampling_result(name, anchor, deficit, details, tol=INEQ_SLACK):
    worst = float(np.max(deficit)) if deficit.size else 0.0
    bad = int(np.sum(~(deficit <= tol)))  # nan counts as a violation
    return CheckResult(
        name, bad == 0, max(worst, 0.0), int(deficit.size), f"{details}; violations={bad}", tol, anchor
    )


# -- scaling and inequality suites ------------------------------------------


def random_profile(rng, n_nodes: int | None = None) -> RadialProfile:
    """A random monotone profile on a random log-uniform grid."""
    n = int(n_nodes or rng.integers(32, 200))
    grid = RadialGrid.log_uniform(n, float(_loguniform(rng, 1e-8, 1e-2, 1)[0]), float(_loguniform(rng, 1.0, 50.0, 1)[0]))
    inc = rng.exponential(1.0, n - 1) * (rng.uniform(size=n - 1) < 0.7)
    inc[-1] += 0.1
    vals = np.concatenate([np.cumsum(inc[::-1])[::-1], [0.0]])
    return RadialProfile(grid, vals)


def check_scaling_laws(trials: int = 1000, rng_seed: int = 0, params: WeightParams | None = None) -> CheckResult:
    """Dilation/amplitude laws of the weighted norms under ``zeta u(tau r)``.

    ``||u_tau||^p_{L^p_theta} = zeta^p tau^{-(theta+1)} ||u||^p`` and
    ``||u_tau'||^p_{L^p_alpha} = zeta^p tau^{p-alpha-1} ||u'||^p``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    params = params or WeightParams(2.0, 1.0)
    p, th = params.p, params.theta
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(trials):
        u = random_profile(rng)
        zeta, tau = _loguniform(rng, 0.1, 10.0, 2)
        v = rescale(u, float(zeta), float(tau))
        l0, l1 = norm_lq_theta(u, p, th) ** p, norm_lq_theta(v, p, th) ** p
        g0, g1 = norm_grad_lp_alpha(u, params) ** p, norm_grad_lp_alpha(v, params) ** p
        e_l = abs(l1 - zeta**p * tau ** (-(th + 1.0)) * l0) / l1
        e_g = abs(g1 - zeta**p * tau ** (p - params.alpha - 1.0) * g0) / g1
        worst = max(worst, e_l, e_g)
    tol = 1e-8
    return CheckResult(
        "scaling_laws", worst <= tol, worst, trials,
        f"p={p:g} theta={th:g}; zeta, tau log-uniform in [0.1, 10]; relative error", tol,
        "dilation scaling of the weighted norms",
    )


def convexity_deficit(x, y, q, eps):
    """``(x+y)^q - [(1+eps)^{(q-1)/q} x^q + (1-(1+eps)^{-1/q})^{1-q} y^q]``."""
    a = (1.0 + eps) ** ((q - 1.0) / q)
    b = (1.0 - (1.0 + eps) ** (-1.0 / q)) ** (1.0 - q)
    return (x + y) ** q - (a * x**q + b * y**q)


def check_convexity_splitting(trials: int = 100_000, rng_seed: int = 0) -> CheckResult:
    """Two-term splitting inequality ``(x+y)^q <= A_eps x^q + B_eps y^q``.

    Both sides are homogeneous of degree ``q`` in ``(x, y)``, so samples are
    evaluated at ``(x, y) / (x + y)`` and the absolute slack applies to the
    normalized deficit.
    """
    rng = np.random.default_rng(rng_seed)
    x = _loguniform(rng, 1e-6, 1e6, trials)
    y = _loguniform(rng, 1e-6, 1e6, trials)
    q = _loguniform(rng, 1.0, 10.0, trials)
    eps = _loguniform(rng, 1e-6, 1e6, trials)
    s = x + y
    d = convexity_deficit(x / s, y / s, q, eps)
    return _sampling_result(
        "convexity_splitting", "two-term convexity splitting inequality", d,
        "x, y in [1e-6, 1e6], q in [1, 10], eps in [1e-6, 1e6] (log-uniform); deficit at x+y=1",
    )


def _random_p(rng, size):
    return rng.uniform(2.0, 4.0, size)


def _phi_vec(t, p):
    # phi_p with a per-sample p; grouped by k0 for vectorized evaluation
    out = np.empty_like(t)
    for k in np.unique(np.ceil(p - 1.0)):
        m = np.ceil(p - 1.0) == k
        out[m] = phi_p(t[m], WeightParams(float(k) + 1.0, 0.0))
    return out


def check_phi_homogeneity(trials: int = 100_000, rng_seed: int = 0) -> CheckResult:
    """``phi_p(rho t) <= rho^{p-1} phi_p(t)`` for ``rho <= 1`` and the reverse for ``rho >= 1``."""
    rng = np.random.default_rng(rng_seed)
    p = _random_p(rng, trials)
    t = _loguniform(rng, 1e-6, 50.0, trials)
    half = trials // 2
    rho = np.concatenate([_loguniform(rng, 1e-6, 1.0, half), _loguniform(rng, 1.0, 1e3, trials - half)])
    rho = np.minimum(rho, np.where(np.arange(trials) < half, 1.0, 50.0 / t))
    lhs = _phi_vec(rho * t, p)
    rhs = rho ** (p - 1.0) * _phi_vec(t, p)
    d = np.where(np.arange(trials) < half, _scaled_deficit(lhs, rhs), _scaled_deficit(rhs, lhs))
    return _sampling_result(
        "phi_homogeneity", "power-type homogeneity of the truncated exponential", d,
        "p in [2, 4] uniform; t in [1e-6, 50], rho in [1e-6, 1] and [1, 50/t] log-uniform",
    )


def check_exp_estimate(trials: int = 100_000, rng_seed: int = 0) -> CheckResult:
    """``phi_p(mu |t|^{p/(p-1)}) <= e^mu |t|^p`` for ``|t| <= 1``."""
    rng = np.random.default_rng(rng_seed)
    p = _random_p(rng, trials)
    mu = _loguniform(rng, 1e-3, 50.0, trials)
    t = _loguniform(rng, 1e-6, 1.0, trials)
    lhs = _phi_vec(mu * t ** (p / (p - 1.0)), p)
    rhs = np.exp(mu) * t**p
    return _sampling_result(
        "exp_estimate", "small-amplitude bound of the truncated exponential", _scaled_deficit(lhs, rhs),
        "p in [2, 4] uniform; mu in [1e-3, 50], |t| in [1e-6, 1] log-uniform",
    )


def check_phi_monotone_sigma(trials: int = 100_000, rng_seed: int = 0) -> CheckResult:
    """``Gamma(p)/s^{p-1} phi_p(s |t|^{p/(p-1)})`` is increasing in ``s``."""
    rng = np.random.default_rng(rng_seed)
    p = _random_p(rng, trials)
    s1 = _loguniform(rng, 1e-3, 50.0, trials)
    s2 = s1 * _loguniform(rng, 1.0 + 1e-6, 10.0, trials)
    c = p / (p - 1.0)
    # keep sigma2 t^c <= 600 so both sides stay finite
    t = _loguniform(rng, 1e-3, 1.0, trials) * np.minimum(3.0, (600.0 / s2) ** (1.0 / c))
    fact = np.array([math.gamma(v) for v in p])
    a = fact / s1 ** (p - 1.0) * _phi_vec(s1 * t**c, p)
    b = fact / s2 ** (p - 1.0) * _phi_vec(s2 * t**c, p)
    return _sampling_result(
        "phi_monotone_sigma", "monotonicity in sigma of the normalized truncated exponential",
        _scaled_deficit(a, b),
        "p in [2, 4] uniform; sigma1 in [1e-3, 50], sigma2/sigma1 in (1, 10], t/min(3, (600/sigma2)^(1/c)) in [1e-3, 1] log-uniform",
    )


def phi_conj_constant(p: float, mu: float, t_max: float = 100.0, points: int = 20_000) -> float:
    """Scanned maximum over ``t in (0, t_max]`` of
    ``[phi_p(mu t^c) - mu^k0/k0! t^{k0 c}] / (phi_p(mu t^c) t^c)`` times 1.01."""
    t = np.geomspace(1e-6, t_max, points)
    return 1.01 * float(np.max(_phi_conj_ratio(t, p, mu)))


def _phi_conj_ratio(t, p, mu):
    prm = WeightParams(p, 0.0)
    x = mu * t**prm.conj
    # phi_p(x) - x^k0/k0! is the series tail from k0+1; logs keep large x finite
    return np.exp(log_exp_tail(x, prm.k0 + 1) - log_exp_tail(x, prm.k0) - prm.conj * np.log(t))


def check_phi_conj(lattice: Sequence[tuple] = ((2.0, 1.0), (2.0, 12.0), (2.5, 5.0), (3.0, 2.0), (3.0, 20.0), (4.0, 10.0)),
                   rng_seed: int = 0, samples: int = 20_000) -> CheckResult:
    """Certify a finite constant in ``phi_p(mu t^c) - mu^k0/k0! t^{k0 c} <= C phi_p(mu t^c) t^c``.

    ``C`` comes from a geometric scan; the inequality is then re-checked at
    independent random ``t`` in ``(0, 100]``.
    """
    rng = np.random.default_rng(rng_seed)
    worst, consts = -math.inf, {}
    for p, mu in lattice:
        C = phi_conj_constant(p, mu)
        t = _loguniform(rng, 1e-6, 100.0, samples)
        r = _phi_conj_ratio(t, p, mu)
        worst = max(worst, float(np.max(r - C)))
        consts[f"{p:g},{mu:g}"] = C
    desc = ", ".join(f"(p,mu)=({k}): C={v:.6g}" for k, v in consts.items())
    ok = worst <= 0.0 and all(math.isfinite(v) for v in consts.values())
    return CheckResult(
        "phi_conj", ok, max(worst, 0.0), samples * len(lattice), desc + "; t in (0, 100] only", 0.0,
        "truncated exponential against its leading term", {"constants": consts},
    )


# -- Moser family ------------------------------------------------------------


def moser_lp_closed_form(n: int, params: WeightParams) -> float:
    """``||u_n||^p_{L^p_theta}`` from ``(c/n)[n^p e^{-n} + int_0^n s^p e^{-s} ds]``.

    ``c = omega_theta / (omega_alpha (theta+1)^p)``; the integral is done by
    adaptive quadrature.
    """
    p = params.p
    c = params.omega_theta / (params.omega_alpha * (params.theta + 1.0) ** p)
    inc, _ = integrate.quad(lambda s: s**p * math.exp(-s), 0.0, float(n), epsabs=0.0, epsrel=1e-13, limit=200)
    return c / n * (n**p * math.exp(-n) + inc)


def moser_limit(params: WeightParams) -> float:
    """``lim n ||u_n||^p = c Gamma(p+1)``."""
    p = params.p
    return params.omega_theta / (params.omega_alpha * (params.theta + 1.0) ** p) * math.gamma(p + 1.0)


def check_moser_asymptotics(n_max: int = 50, params: WeightParams | None = None) -> CheckResult:
    params = params or WeightParams(2.0, 1.0)
    p = params.p
    worst_g = worst_l = 0.0
    prod = []
    for n in range(1, n_max + 1):
        u = make_moser(n, params)
        g = norm_grad_lp_alpha(u, params) ** p
        l = norm_lq_theta(u, p, params.theta) ** p
        ref = moser_lp_closed_form(n, params)
        worst_g = max(worst_g, abs(g - 1.0))
        worst_l = max(worst_l, abs(l - ref) / ref)
        prod.append(n * l)
    prod = np.array(prod)
    ratio_end = float(prod[-1] / prod[-2]) if n_max > 1 else 1.0
    bounded = bool(np.all(prod <= 1.01 * max(moser_limit(params), prod.max())))
    tol = 1e-6
    worst = max(worst_g, worst_l, abs(ratio_end - 1.0) - 0.02 if n_max >= 50 else 0.0)
    ok = worst_g <= tol and worst_l <= tol and bounded and (n_max < 50 or abs(ratio_end - 1.0) <= 0.02)
    return CheckResult(
        "moser_asymptotics", ok, max(worst_g, worst_l), n_max,
        f"p={p:g} theta={params.theta:g}; max|grad^p-1|={worst_g:.3g}; max rel err n*||u_n||^p={worst_l:.3g}; "
        f"last consecutive ratio={ratio_end:.6f}; limit c*Gamma(p+1)={moser_limit(params):.6g}",
        tol, "Moser concentration family: unit gradient and 1/n decay of the L^p norm",
        {"n_times_lp": prod.tolist()},
    )


def log_moser_cap_integral(n: int, mu: float, params: WeightParams) -> float:
    """Log of the cap contribution ``omega_theta/(theta+1) phi_p((mu/mu*) n) e^{-n}``.

    The cap ``r <= e^{-n/(theta+1)}`` of ``u_n`` alone gives this much of the
    integral, so it is a lower bound for the whole.
    """
    x = mu / params.mu_star * n
    if x <= 0:
        return -math.inf
    return math.log(params.omega_theta / (params.theta + 1.0)) + float(log_exp_tail(np.array([x]), params.k0)[0]) - n


def moser_cap_integral(n: int, mu: float, params: WeightParams) -> float:
    """``exp`` of :func:`log_moser_cap_integral` (may overflow to ``inf``)."""
    lv = log_moser_cap_integral(n, mu, params)
    return math.exp(lv) if lv < 709.0 else math.inf


def sharpness_sequences(sigma: float, n_values, params: WeightParams):
    """Log critical objective along ``v_n`` and log subcritical ratio along ``u_n``.

    The critical sequence is evaluated at ``sigma``, the subcritical one at
    ``min(sigma, mu*)`` since ``u_n`` has unit gradient norm.
    """
    crit, sub, taus = [], [], []
    mu = min(sigma, params.mu_star)
    for n in n_values:
        u = make_moser(n, params)
        v = tau_corrected_moser(n, params)
        taus.append(float(v.values[0] / u.values[0]))
        crit.append(critical_objective(v, sigma, params, log=True))
        sub.append(subcritical_objective(u, mu, params, log=True))
    return np.array(crit), np.array(sub), np.array(taus)


def check_sharpness_blowup(mu: float, n_max: int = 60, params: WeightParams | None = None) -> CheckResult:
    """Growth along the concentration families above the sharp exponent.

    Passes when ``value(n+10) >= 2 value(n)`` holds for every ``n >= n0`` with
    some ``n0 <= 40`` (``n + 10 <= n_max``), compared through log-values.
    ``details`` also reports the asymptotic slope of the log objective,
    the behaviour of ``tau_n`` and the subcritical ratio at ``min(mu, mu*)``.
    """
    params = params or WeightParams(2.0, 1.0)
    if mu < params.mu_star:
        raise DomainError(f"blow-up check needs mu >= mu*, got {mu!r}")
    if n_max < 11:
        raise DomainError("n_max must be at least 11")
    ns = np.arange(1, n_max + 1)
    crit, sub, taus = sharpness_sequences(mu, ns, params)
    step = crit[10:] - crit[:-10] - math.log(2.0)  # >= 0 means doubling over 10 steps
    good = step >= 0.0
    n0 = None
    for i in range(good.size):
        if good[i:].all():
            n0 = int(ns[i])
            break
    tail = max(0, ns.size - 20)
    slope = float(np.polyfit(ns[tail:], crit[tail:], 1)[0])
    tau_drop = float(np.max(np.maximum(taus[:-1] - taus[1:], 0.0)))
    window = step[(ns[:-10] >= 40)]
    worst = float(max(0.0, -window.min())) if window.size else 0.0
    ok = n0 is not None and n0 <= 40
    det = (
        f"sigma/mu*={mu / params.mu_star:.6g}; first n with doubling from there on: {n0}; "
        f"min log(V(n+10)/V(n)) for n>=40: {window.min() + math.log(2.0) if window.size else math.nan:.6g} "
        f"(needs {math.log(2.0):.6g}); log-objective slope over last 20 n: {slope:.6g} "
        f"(asymptotic {mu / params.mu_star - 1.0:.6g}); tau_{n_max}={taus[-1]:.6g}, "
        f"max tau decrease={tau_drop:.3g}; subcritical log-ratio n={n_max}: {sub[-1]:.6g}"
    )
    return CheckResult(
        "sharpness_blowup", ok, worst, int(ns.size), det, 0.0,
        "divergence above the sharp exponent along tau-corrected Moser profiles",
        {"log_critical": crit.tolist(), "log_subcritical": sub.tolist(), "tau": taus.tolist(), "slope": slope, "n0": n0},
    )


def check_bounded_below_sharp(sigma: float, n_max: int = 60, params: WeightParams | None = None) -> CheckResult:
    """Below ``mu*`` the critical objective along ``v_n`` stays bounded."""
    params = params or WeightParams(2.0, 1.0)
    if not 0 < sigma < params.mu_star:
        raise DomainError("sigma must lie in (0, mu*)")
    crit, _, _ = sharpness_sequences(sigma, range(1, n_max + 1), params)
    vals = np.exp(crit)
    tail = vals[n_max // 2:]
    growth = float(tail[-1] / tail[0])
    ok = growth <= 1.0 + 1e-6 or float(tail.max()) <= 2.0 * float(vals[: n_max // 2].max())
    return CheckResult(
        "bounded_below_sharp", ok, max(growth - 1.0, 0.0), n_max,
        f"sigma/mu*={sigma / params.mu_star:.6g}; max value={vals.max():.6g}; tail growth factor={growth:.6g}",
        0.0, "finiteness below the sharp exponent along tau-corrected Moser profiles",
    )


# -- optimizer-backed checks -------------------------------------------------


def check_tmsc_continuity(
    s_grid: Sequence[float] = (0.1, 0.05, 0.025),
    params: WeightParams | None = None,
    cfg: OptimizerConfig | None = None,
    s_range: tuple = (0.2, 0.6),
) -> CheckResult:
    """Subcritical estimates on nested grids of ``mu/mu*`` with the given spacings.

    Passes when the largest successive difference shrinks strictly from each
    grid to the next finer one and the estimates are non-decreasing in
    ``mu`` up to a relative 1e-6.
    """
    params = params or WeightParams(2.0, 1.0)
    cfg = cfg or OptimizerConfig()
    hs = sorted((float(h) for h in s_grid), reverse=True)
    lo, hi = s_range
    if any(h < 0 for h in hs):
        raise DomainError("spacings must be non-negative")
    pos = [h for h in hs if h > 0]
    if not pos:
        return CheckResult("tmsc_continuity", True, 0.0, 0, "constant grid", 0.0, "continuity of the subcritical supremum in mu")
    finest = min(pos)
    m = int(round((hi - lo) / finest))
    fracs = lo + finest * np.arange(m + 1)
    vals = {}
    for f in fracs:
        vals[round(float(f), 12)] = _tmsc_cached(float(f) * params.mu_star, params, cfg).value
    diffs = []
    for h in pos:
        stride = int(round(h / finest))
        seq = [vals[round(float(f), 12)] for f in fracs[::stride]]
        diffs.append(float(np.max(np.abs(np.diff(seq)))) if len(seq) > 1 else 0.0)
    seq = np.array([vals[k] for k in sorted(vals)])
    drop = float(np.max(np.maximum(seq[:-1] - seq[1:], 0.0) / seq[1:])) if seq.size > 1 else 0.0
    shrinking = all(a > b for a, b in zip(diffs, diffs[1:]))
    return CheckResult(
        "tmsc_continuity", shrinking and drop <= 1e-6, drop, int(fracs.size),
        f"mu/mu* in [{lo:g}, {hi:g}], spacings {pos}; max successive differences {[f'{d:.6g}' for d in diffs]}; "
        f"worst relative decrease {drop:.3g}",
        1e-6, "continuity of the subcritical supremum in mu", {"diffs": diffs},
    )


def check_small_sigma_value(
    sigma_list: Sequence[float],
    params: WeightParams | None = None,
    cfg: OptimizerConfig | None = None,
    delta_res: float = 1e-3,
) -> CheckResult:
    """For ``p = 2``: critical estimate against ``sigma`` at small ``sigma``.

    Fails when an estimate falls below ``sigma - 1e-6`` or the vanishing
    family cannot reach ``sigma (1 - 1e-4)``.  Estimates above
    ``sigma (1 + delta_res)`` are listed as evidence that ``sigma > sigma_*``.
    """
    params = params or WeightParams(2.0, 1.0)
    cfg = cfg or OptimizerConfig()
    if abs(params.p - 2.0) > 1e-12:
        raise DomainError("the small-sigma value check applies to p = 2")
    worst, flagged, rows = 0.0, [], []
    for s in sorted(float(x) for x in sigma_list):
        if s == 0.0:
            rows.append((0.0, 0.0, 0.0))
            continue
        est = maximize_tmc(s, params, cfg).value
        base = unit_full_norm(bump(cfg.grid, min(1.0, cfg.grid.r_max / 4)), params)
        ish = math.exp(_ishiwata_search(s, params, base, cfg, "bump").value)
        worst = max(worst, s - 1e-6 - est, s * (1.0 - 1e-4) - ish)
        if est > s * (1.0 + delta_res):
            flagged.append(s / params.mu_star)
        rows.append((s, est, ish))
    det = "; ".join(f"sigma={s:.6g}: est={e:.12g} vanishing={i:.12g}" for s, e, i in rows)
    det += f"; above sigma*(1+{delta_res:g}) at sigma/mu* in {flagged}"
    return CheckResult(
        "small_sigma_value", worst <= 0.0, max(worst, 0.0), len(rows), det, 0.0,
        "critical value equals sigma for small sigma when p = 2", {"flagged": flagged},
    )


def check_identity_transform(params: WeightParams | None = None, cfg: OptimizerConfig | None = None,
                             sigma_frac: float = 0.5, mu_fracs: Sequence[float] = (0.2, 0.5, 0.8)) -> CheckResult:
    """Norms of transformed subcritical maximizers: ``||u_t'||^p = rho``, ``||u_t||^p = 1 - rho``."""
    params = params or WeightParams(2.0, 1.0)
    cfg = cfg or OptimizerConfig()
    sigma = sigma_frac * params.mu_star
    worst = 0.0
    for f in mu_fracs:
        mu = f * sigma
        w = identity_transform(_tmsc_cached(mu, params, cfg).argmax_profile, mu, sigma, params)
        rho = f ** (params.p - 1.0)
        worst = max(
            worst,
            abs(norm_grad_lp_alpha(w, params) ** params.p - rho),
            abs(norm_lq_theta(w, params.p, params.theta) ** params.p - (1.0 - rho)),
        )
    tol = 1e-6
    return CheckResult(
        "identity_transform", worst <= tol, worst, len(mu_fracs),
        f"sigma/mu*={sigma_frac:g}, mu/sigma in {list(mu_fracs)}", tol,
        "transform between subcritical and critical constraint sets",
    )


def check_radial_decay(trials: int = 200, rng_seed: int = 0, params: WeightParams | None = None) -> CheckResult:
    """``r^a |u(r)|^p <= C ||u||^p`` at every node of random and Moser profiles."""
    params = params or WeightParams(2.0, 1.0)
    rng = np.random.default_rng(rng_seed)
    C = radial_decay_constant(params)
    worst = 0.0
    profs = [random_profile(rng) for _ in range(trials)] + [make_moser(n, params) for n in (1, 5, 20, 50)]
    for u in profs:
        worst = max(worst, float(np.max(radial_decay_ratio(u, params))) - C)
        if u.values[-1] != 0.0:
            worst = max(worst, math.inf)
    return CheckResult(
        "radial_decay", worst <= 0.0, max(worst, 0.0), len(profs),
        f"C={C:.6g} for p={params.p:g} theta={params.theta:g}", 0.0,
        "pointwise radial decay bound",
    )


# -- suite -------------------------------------------------------------------

SUITES = ("quick", "all")


def run_suite(name: str = "all", rng_seed: int = 0, cfg: OptimizerConfig | None = None) -> list[CheckResult]:
    """Run a named suite; results are ordered by check name.

    ``quick`` runs the sampling and family checks; ``all`` adds the
    optimizer-backed ones.
    """
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {SUITES}")
    params = WeightParams(2.0, 1.0)
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_scaling_laws(1000, rng_seed, params),
        lambda: check_convexity_splitting(100_000, rng_seed),
        lambda: check_phi_homogeneity(100_000, rng_seed),
        lambda: check_exp_estimate(100_000, rng_seed),
        lambda: check_phi_monotone_sigma(100_000, rng_seed),
        lambda: check_phi_conj(rng_seed=rng_seed),
        lambda: check_moser_asymptotics(50, params),
        lambda: check_sharpness_blowup(1.1 * params.mu_star, 60, params),
        lambda: check_bounded_below_sharp(0.9 * params.mu_star, 60, params),
        lambda: check_radial_decay(200, rng_seed, params),
    ]
    if name == "all":
        cfg = cfg or OptimizerConfig(rng_seed=rng_seed)
        checks += [
            lambda: check_identity_transform(params, cfg),
            lambda: check_tmsc_continuity((0.1, 0.05, 0.025), params, cfg),
            lambda: check_small_sigma_value([0.0, 0.05 * params.mu_star, 0.2 * params.mu_star], params, cfg),
        ]
    return sorted((c() for c in checks), key=lambda r: r.name)


def format_manifest(results: Sequence[CheckResult]) -> str:
    """Tab-separated manifest: name, anchor, PASS/FAIL, worst violation, samples, details."""
    lines = ["name\tanchor\tstatus\tworst_violation\tsamples\tdetails"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name}\t{r.anchor}\t{status}\t{r.worst_violation:.17g}\t{r.samples}\t{r.details}")
    return "\n".join(lines) + "\n"
