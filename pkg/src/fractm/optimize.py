"""Lower-bound estimates of the subcritical and critical suprema.

Both problems are searched over monotone log-linear profiles.  Seeds come
from the explicit families (Moser concentration, vanishing dilations, plain
shapes), the best seeds are refined by an ascent on the nodal values, and
the winner is re-evaluated with the public functionals.  Every reported value
is attained by the returned profile, so it is a lower bound for the supremum
up to quadrature error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, RegimeError
from .functionals import (
    critical_objective,
    exp_tail,
    identity_ratio,
    subcritical_objective,
)
from .measure import (
    WeightParams,
    _cap_weight,
    full_norm,
    norm_grad_lp_alpha,
    norm_lq_theta,
)
from .profiles import (
    RadialGrid,
    RadialProfile,
    bump,
    default_grid,
    make_ishiwata,
    make_moser,
    normalize_subcritical,
    project_monotone,
    rescale,
    tent,
    unit_full_norm,
)

KINDS = ("moser", "ishiwata", "custom")


@dataclass(frozen=True, eq=False)
class TestFamilySpec:
    """A seed family.  ``index=None`` means the family parameter is line-searched."""

    kind: str
    index: float | None = None
    base: RadialProfile | None = None

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.kind == "moser" and self.index is not None:
            if int(self.index) != self.index or self.index < 1:
                raise DomainError(f"Moser index must be an integer >= 1, got {self.index!r}")
        if self.kind == "ishiwata" and self.index is not None and not 0 < self.index < 1:
            raise DomainError(f"Ishiwata parameter must lie in (0, 1), got {self.index!r}")
        if self.kind == "custom" and self.base is None:
            raise DomainError("custom seed families need a base profile")


DEFAULT_FAMILIES = (TestFamilySpec("moser"), TestFamilySpec("ishiwata"))


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 2000
    step_init: float = 1.0
    step_shrink: float = 0.5
    tol_obj: float = 1e-12
    restarts: int = 4
    seed_families: tuple = DEFAULT_FAMILIES
    grid: RadialGrid = field(default_factory=default_grid)
    rng_seed: int = 0
    method: str = "lbfgs"
    moser_n_max: int = 80
    ishiwata_t_min: float = 1e-12
    ishiwata_t_max: float = 0.5
    ishiwata_points: int = 48
    identity_seed_fracs: tuple = (0.25, 0.5, 0.75)
    panel_order: int = 8

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if not self.tol_obj > 0:
            raise DomainError("tol_obj must be positive")
        if not 0 < self.step_shrink < 1:
            raise DomainError("step_shrink must lie in (0, 1)")
        if not self.step_init > 0:
            raise DomainError("step_init must be positive")
        if self.method not in ("lbfgs", "projected"):
            raise DomainError(f"unknown method {self.method!r}")
        if not 0 < self.ishiwata_t_min < self.ishiwata_t_max < 1:
            raise DomainError("need 0 < ishiwata_t_min < ishiwata_t_max < 1")
        object.__setattr__(self, "seed_families", tuple(self.seed_families))
        object.__setattr__(self, "identity_seed_fracs", tuple(self.identity_seed_fracs))


@dataclass
class SupremumEstimate:
    """Lower-bound estimate of a supremum together with the profile attaining it."""

    value: float
    argmax_profile: RadialProfile
    mu_or_sigma: float
    kind: str
    iterations_used: int
    converged: bool
    constraint_residuals: dict
    seed: str = ""
    quadrature_error: float = 0.0
    exploratory: bool = False
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self, params: WeightParams, include_profile: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "p": params.p,
            "alpha": params.alpha,
            "theta": params.theta,
            "mu_star": params.mu_star,
            "parameter": self.mu_or_sigma,
            "parameter_frac": self.mu_or_sigma / params.mu_star,
            "value": self.value,
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "constraint_residuals": dict(self.constraint_residuals),
            "seed": self.seed,
            "quadrature_error": self.quadrature_error,
            "exploratory": self.exploratory,
            "diagnostics": self.diagnostics,
        }
        if include_profile:
            u = self.argmax_profile
            out["profile"] = {"radius": u.grid.nodes.tolist(), "value": u.values.tolist()}
        return out


# -- discretized objectives with gradients ------------------------------------


class _Discrete:
    """Nodal-value calculus for profiles on one grid.

    Mirrors the quadrature in :mod:`fractm.measure` and adds gradients with
    respect to the nodal values.
    """

    def __init__(self, grid: RadialGrid, params: WeightParams, order: int = 8):
        rule = grid.rule(order)
        _, self.cell, self.lam, _ = rule.panels
        self.params = params
        self.n = grid.size
        self.w = params.omega_theta * rule.weights(params.theta)
        self.cap = params.omega_theta * _cap_weight(grid.nodes[0], params.theta)
        self.ds = np.diff(rule.log_nodes)

    def _back(self, g_q, g_cap):
        out = np.bincount(self.cell, g_q * (1.0 - self.lam), minlength=self.n)
        out += np.bincount(self.cell + 1, g_q * self.lam, minlength=self.n)
        out[0] += g_cap
        return out

    def _at_panels(self, v):
        return (1.0 - self.lam) * v[self.cell] + self.lam * v[self.cell + 1]

    def energy(self, v):
        p = self.params.p
        dv = np.diff(v)
        a = np.abs(dv)
        e = self.params.omega_alpha * float(np.sum(a**p / self.ds ** (p - 1.0)))
        ge = self.params.omega_alpha * p * np.sign(dv) * a ** (p - 1.0) / self.ds ** (p - 1.0)
        g = np.zeros(self.n)
        g[1:] += ge
        g[:-1] -= ge
        return e, g

    def lp(self, v):
        p = self.params.p
        u = self._at_panels(v)
        val = self.cap * v[0] ** p + float(self.w @ u**p)
        return val, self._back(self.w * p * u ** (p - 1.0), self.cap * p * v[0] ** (p - 1.0))

    def tm(self, v, mu):
        prm = self.params
        c, k = prm.conj, prm.k0
        u = self._at_panels(v)
        t, t0 = mu * u**c, mu * v[0] ** c
        val = self.cap * float(exp_tail(np.array([t0]), k)[0]) + float(self.w @ exp_tail(t, k))
        d = exp_tail(t, k - 1) * mu * c * u ** (c - 1.0)
        d0 = float(exp_tail(np.array([t0]), k - 1)[0]) * mu * c * v[0] ** (c - 1.0)
        return val, self._back(self.w * d, self.cap * d0)

    def subcritical(self, v, mu):
        """Objective ``TM(w)/||w||^p`` at ``w = v/||v'||`` and its gradient in ``v``."""
        p = self.params.p
        e, ge = self.energy(v)
        if e <= 0:
            return 0.0, np.zeros(self.n)
        g = e ** (1.0 / p)
        w = v / g
        t, gt = self.tm(w, mu)
        l, gl = self.lp(w)
        f = t / l
        gf = gt / l - t * gl / l**2
        dg = e ** (1.0 / p - 1.0) / p * ge
        return f, (gf - dg * float(w @ gf)) / g

    def critical(self, v, sigma):
        """Objective ``TM(w)`` at ``w = v/||v||`` (full norm) and its gradient in ``v``."""
        p = self.params.p
        e, ge = self.energy(v)
        l, gl = self.lp(v)
        tot = e + l
        if tot <= 0:
            return 0.0, np.zeros(self.n)
        nrm = tot ** (1.0 / p)
        w = v / nrm
        t, gt = self.tm(w, sigma)
        dn = (ge + gl) * tot ** (1.0 / p - 1.0) / p
        return t, (gt - dn * float(w @ gt)) / nrm


def _values_from_increments(d):
    return np.concatenate([np.cumsum(d[::-1])[::-1], [0.0]])


def _ascend_lbfgs(fun, v0, cfg: OptimizerConfig):
    def neg(d):
        f, g = fun(_values_from_increments(d))
        return -f, -np.cumsum(g)[:-1]

    d0 = np.maximum(-np.diff(v0), 0.0)
    res = minimize(
        neg,
        d0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(0.0, None)] * d0.size,
        options={"maxiter": cfg.max_iters, "maxfun": 3 * cfg.max_iters, "ftol": cfg.tol_obj, "gtol": 1e-14},
    )
    v = _values_from_increments(res.x)
    # a failed line search at the optimum still leaves a valid iterate
    converged = bool(res.success) or "ABNORMAL" in str(res.message)
    return v, int(res.nit), converged


def _ascend_projected(fun, v0, cfg: OptimizerConfig, normalize):
    """Projected gradient ascent: step, monotone projection, renormalize, backtrack."""
    v = normalize(project_monotone(v0))
    f, g = fun(v)
    step = cfg.step_init
    stalls = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        while True:
            w = normalize(project_monotone(v + step * g))
            fw, gw = fun(w)
            if fw > f or step < 1e-300:
                break
            step *= cfg.step_shrink
        if not fw > f:
            return v, it, True
        gain = (fw - f) / max(abs(f), 1e-300)
        v, f, g = w, fw, gw
        stalls = stalls + 1 if gain < cfg.tol_obj else 0
        if stalls >= 3:
            return v, it, True
        step /= cfg.step_shrink
    return v, it, False


def _refine(profile: RadialProfile, fun_factory, cfg: OptimizerConfig, normalize):
    disc = _Discrete(profile.grid, fun_factory.params, cfg.panel_order)
    fun = fun_factory(disc)
    v0 = np.array(profile.values, dtype=float)
    if cfg.method == "lbfgs":
        v, its, ok = _ascend_lbfgs(fun, v0, cfg)
    else:
        v, its, ok = _ascend_projected(fun, v0, cfg, lambda x: normalize(disc, x))
    v = project_monotone(v)
    return RadialProfile(profile.grid, v), its, ok


class _Objective:
    def __init__(self, params, value, kind):
        self.params, self.value, self.kind = params, value, kind

    def __call__(self, disc):
        if self.kind == "subcritical":
            return lambda v: disc.subcritical(v, self.value)
        return lambda v: disc.critical(v, self.value)


def _norm_grad(disc, v):
    e = disc.energy(v)[0]
    return v / e ** (1.0 / disc.params.p) if e > 0 else v


def _norm_full(disc, v):
    tot = disc.energy(v)[0] + disc.lp(v)[0]
    return v / tot ** (1.0 / disc.params.p) if tot > 0 else v


# -- seeds ---------------------------------------------------------------------


@dataclass
class _Seed:
    label: str
    family: str
    profile: RadialProfile
    value: float  # natural log of the objective


def _shape_bases(cfg: OptimizerConfig):
    grid = cfg.grid
    width = min(1.0, grid.r_max / 4)
    out = [("bump", bump(grid, width)), ("tent", tent(grid, 2 * width))]
    out += [(f"custom{i}", f.base) for i, f in enumerate(cfg.seed_families) if f.kind == "custom"]
    return out


def _family(cfg: OptimizerConfig, kind: str):
    for f in cfg.seed_families:
        if f.kind == kind:
            return f
    return None


def _moser_range(cfg: OptimizerConfig, spec: TestFamilySpec | None):
    if spec is None:
        return []
    if spec.index is not None:
        return [int(spec.index)]
    return list(range(1, cfg.moser_n_max + 1))


def _tmsc_seeds(mu: float, params: WeightParams, cfg: OptimizerConfig) -> list[_Seed]:
    seeds = []
    best = None
    for n in _moser_range(cfg, _family(cfg, "moser")):
        u = make_moser(n, params)
        val = subcritical_objective(u, mu, params, log=True, order=cfg.panel_order)
        if best is None or val > best.value:
            best = _Seed(f"moser(n={n})", "moser", u, val)
    if best is not None:
        seeds.append(best)
    for label, base in _shape_bases(cfg):
        if base.is_zero():
            continue
        g = norm_grad_lp_alpha(base, params)
        u = rescale(base, 1.0 / g, 1.0)
        val = subcritical_objective(u, mu, params, log=True, order=cfg.panel_order)
        seeds.append(_Seed(label, "custom", u, val))
    return seeds


def _ishiwata_search(sigma, params, base, cfg, label):
    """Best ``t`` of the vanishing family: log-spaced scan, then golden refinement."""
    def value(log_t):
        v = make_ishiwata(math.exp(log_t), base, params)
        return critical_objective(v, sigma, params, log=True, order=cfg.panel_order), v

    spec = _family(cfg, "ishiwata")
    if spec is not None and spec.index is not None:
        val, v = value(math.log(spec.index))
        return _Seed(f"{label}-ishiwata(t={spec.index:.6g})", "ishiwata", v, val)
    grid = np.linspace(math.log(cfg.ishiwata_t_min), math.log(cfg.ishiwata_t_max), cfg.ishiwata_points)
    vals = [value(x)[0] for x in grid]
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    best_x, best_val = grid[i], vals[i]
    if 0 < i < grid.size - 1:
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c, d = b - gr * (b - a), a + gr * (b - a)
        fc, fd = value(c)[0], value(d)[0]
        for _ in range(40):
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - gr * (b - a)
                fc = value(c)[0]
            else:
                a, c, fc = c, d, fd
                d = a + gr * (b - a)
                fd = value(d)[0]
        for x, fx in ((c, fc), (d, fd)):
            if fx > best_val:
                best_x, best_val = x, fx
    val, v = value(best_x)
    return _Seed(f"{label}-ishiwata(t={math.exp(best_x):.6g})", "ishiwata", v, val)


def _tmc_seeds(sigma, params, cfg, extra=()) -> list[_Seed]:
    seeds = []
    bases = []
    for label, b in _shape_bases(cfg):
        if not b.is_zero():
            bases.append((label, unit_full_norm(b, params)))
    for label, base in bases:
        seeds.append(_Seed(label, "custom", base, critical_objective(base, sigma, params, log=True)))
    if _family(cfg, "ishiwata") is not None:
        for label, base in bases:
            seeds.append(_ishiwata_search(sigma, params, base, cfg, label))
    best = None
    for n in _moser_range(cfg, _family(cfg, "moser")):
        v = tau_corrected_moser(n, params)
        val = critical_objective(v, sigma, params, log=True, order=cfg.panel_order)
        if best is None or val > best.value:
            best = _Seed(f"moser-v(n={n})", "moser", v, val)
    if best is not None:
        seeds.append(best)
    for frac in cfg.identity_seed_fracs:
        mu = frac * sigma
        est = _tmsc_cached(mu, params, cfg)
        w = identity_transform(est.argmax_profile, mu, sigma, params)
        val = critical_objective(w, sigma, params, log=True, order=cfg.panel_order)
        seeds.append(_Seed(f"identity(mu/sigma={frac:.6g})", "identity", w, val))
    for i, u in enumerate(extra):
        u = unit_full_norm(u, params)
        seeds.append(_Seed(f"warm{i}", "warm", u, critical_objective(u, sigma, params, log=True)))
    return seeds


def tau_corrected_moser(n: int, params: WeightParams) -> RadialProfile:
    """``tau_n u_n`` with ``tau_n^p (1 + ||u_n||^p_{L^p_theta}) = 1`` (unit full norm)."""
    u = make_moser(n, params)
    l = norm_lq_theta(u, params.p, params.theta) ** params.p
    return rescale(u, (1.0 + l) ** (-1.0 / params.p), 1.0)


def identity_transform(u: RadialProfile, mu: float, sigma: float, params: WeightParams) -> RadialProfile:
    """``(mu/sigma)^{(p-1)/p} u(t r)`` with ``t = (rho/(1-rho))^{1/(theta+1)}``, ``rho = (mu/sigma)^{p-1}``.

    For a bi-normalized ``u`` the image has ``||u_t'||^p = rho`` and
    ``||u_t||^p_{L^p_theta} = 1 - rho``.
    """
    if not 0 < mu < sigma:
        raise DomainError(f"need 0 < mu < sigma, got mu={mu!r}, sigma={sigma!r}")
    rho = (mu / sigma) ** (params.p - 1.0)
    t = (rho / (1.0 - rho)) ** (1.0 / (params.theta + 1.0))
    return rescale(u, (mu / sigma) ** ((params.p - 1.0) / params.p), t)


def _pick_starts(seeds: list[_Seed], restarts: int) -> list[_Seed]:
    ranked = sorted(seeds, key=lambda s: (-s.value, s.label))
    starts, kinds = [], set()
    for s in ranked:
        if s.family not in kinds:
            starts.append(s)
            kinds.add(s.family)
    return starts[:restarts]


def _perturbed(seed: _Seed, k: int, cfg: OptimizerConfig) -> RadialProfile:
    rng = np.random.default_rng([cfg.rng_seed, k])
    v = seed.profile.values * np.exp(0.2 * rng.standard_normal(seed.profile.grid.size))
    return RadialProfile(seed.profile.grid, project_monotone(v))


def _run(seeds, objective, cfg, normalize, finish, score):
    starts = _pick_starts(seeds, cfg.restarts)
    jobs = [(s.label, s.profile) for s in starts]
    k = 0
    while len(jobs) < cfg.restarts:
        best = starts[0]
        jobs.append((f"{best.label}+perturb{k}", _perturbed(best, k, cfg)))
        k += 1
    total_its, results = 0, []
    for label, prof in jobs:
        refined, its, ok = _refine(prof, objective, cfg, normalize)
        total_its += its
        if refined.is_zero():
            continue
        u = finish(refined)
        results.append((score(u), label + "+refined", u, ok))
    # unrefined seeds stay eligible: refinement never loses a certified value
    for s in seeds:
        results.append((s.value, s.label, s.profile, True))
    results.sort(key=lambda r: (-r[0], r[1]))
    return results[0], total_its


def _certify(u, value_fn, order):
    v1 = value_fn(u, order)
    v2 = value_fn(u, 2 * order)
    return v1, abs(v1 - v2) / max(abs(v2), 1e-300)


def maximize_tmsc(mu: float, params: WeightParams, cfg: OptimizerConfig | None = None) -> SupremumEstimate:
    """Lower-bound estimate of the subcritical supremum at ``mu``.

    The returned profile is bi-normalized (unit gradient and unit
    ``L^p_theta`` norm), so its objective is the integral itself.
    """
    cfg = cfg or OptimizerConfig()
    if not 0 < mu < params.mu_star:
        raise DomainError(f"mu must lie in (0, mu*={params.mu_star!r}), got {mu!r}")
    seeds = _tmsc_seeds(mu, params, cfg)
    if not seeds:
        raise DomainError("no seed families configured")

    def finish(u):
        return normalize_subcritical(u, params)

    def score(u):
        return subcritical_objective(u, mu, params, log=True, order=cfg.panel_order)

    (log_val, label, u, ok), its = _run(
        seeds, _Objective(params, mu, "subcritical"), cfg, _norm_grad, finish, score
    )
    u = normalize_subcritical(u, params)
    value, qerr = _certify(u, lambda w, o: subcritical_objective(w, mu, params, order=o), cfg.panel_order)
    res = {
        "grad": abs(norm_grad_lp_alpha(u, params) - 1.0),
        "lp": abs(norm_lq_theta(u, params.p, params.theta) - 1.0),
    }
    diag = {"seed_log_values": {s.label: s.value for s in seeds}}
    return SupremumEstimate(value, u, mu, "subcritical", its, ok, res, label, qerr, diagnostics=diag)


@lru_cache(maxsize=256)
def _tmsc_cached(mu: float, params: WeightParams, cfg: OptimizerConfig) -> SupremumEstimate:
    return maximize_tmsc(mu, params, cfg)


def maximize_tmc(
    sigma: float,
    params: WeightParams,
    cfg: OptimizerConfig | None = None,
    warm_starts: Sequence[RadialProfile] = (),
) -> SupremumEstimate:
    """Lower-bound estimate of the critical supremum at ``sigma``.

    ``warm_starts`` are extra seed profiles (rescaled to unit full norm).
    At ``sigma = mu*`` the estimate is flagged exploratory: concentrating
    sequences there are limited by the grid's smallest radius.
    """
    cfg = cfg or OptimizerConfig()
    if not 0 < sigma <= params.mu_star:
        raise DomainError(f"sigma must lie in (0, mu*={params.mu_star!r}], got {sigma!r}")
    seeds = _tmc_seeds(sigma, params, cfg, warm_starts)

    def finish(u):
        return unit_full_norm(u, params)

    def score(u):
        return critical_objective(u, sigma, params, log=True, order=cfg.panel_order)

    (log_val, label, u, ok), its = _run(
        seeds, _Objective(params, sigma, "critical"), cfg, _norm_full, finish, score
    )
    value, qerr = _certify(u, lambda w, o: critical_objective(w, sigma, params, order=o), cfg.panel_order)
    res = {"full": abs(full_norm(u, params) - 1.0)}
    lower = sigma ** params.k0 / math.factorial(params.k0)
    diag = {"vanishing_lower_bound": lower, "seed_log_values": {s.label: s.value for s in seeds}}
    return SupremumEstimate(
        value, u, sigma, "critical", its, ok, res, label, qerr,
        exploratory=sigma >= params.mu_star, diagnostics=diag,
    )


def default_identity_fracs() -> list[float]:
    """``mu/sigma`` ratios used when no grid is given: two tiny values and 0.1..0.9."""
    return [1e-3, 1e-2] + [round(0.1 * k, 10) for k in range(1, 10)]


def tmc_via_identity(
    sigma: float,
    params: WeightParams,
    mu_grid: Sequence[float] | None = None,
    cfg: OptimizerConfig | None = None,
) -> SupremumEstimate:
    """Critical estimate from subcritical maximizers.

    For each ``mu`` the subcritical argmax is mapped by
    :func:`identity_transform` onto the unit sphere of the full norm and
    evaluated at ``sigma``; the best image is returned.  ``diagnostics["rows"]``
    holds ``mu``, the subcritical estimate, the predicted value
    ``identity_ratio * estimate`` and the evaluated critical value per point.
    """
    cfg = cfg or OptimizerConfig()
    if mu_grid is None:
        mu_grid = [f * sigma for f in default_identity_fracs()]
    mu_grid = sorted(float(m) for m in mu_grid)
    if not mu_grid:
        raise DomainError("mu_grid must not be empty")
    if not 0 < sigma <= params.mu_star:
        raise DomainError(f"sigma must lie in (0, mu*], got {sigma!r}")
    if mu_grid[0] <= 0 or mu_grid[-1] >= sigma:
        raise DomainError("mu_grid must lie strictly inside (0, sigma)")
    rows, best = [], None
    its, converged = 0, True
    for mu in mu_grid:
        est = _tmsc_cached(mu, params, cfg)
        its += est.iterations_used
        converged = converged and est.converged
        w = identity_transform(est.argmax_profile, mu, sigma, params)
        rho = (mu / sigma) ** (params.p - 1.0)
        g = norm_grad_lp_alpha(w, params) ** params.p
        l = norm_lq_theta(w, params.p, params.theta) ** params.p
        if abs(g - rho) > 1e-6 or abs(l - (1.0 - rho)) > 1e-6:
            raise ArithmeticError(f"transformed profile off the unit sphere at mu={mu!r}")
        val = critical_objective(w, sigma, params, order=cfg.panel_order)
        rows.append(
            {
                "mu": mu,
                "tmsc_estimate": est.value,
                "predicted": identity_ratio(mu, sigma, params) * est.value,
                "critical_value": val,
                "grad_p": g,
                "lp_p": l,
            }
        )
        if best is None or val > best[0]:
            best = (val, mu, w, est)
    val, mu, w, est = best
    value, qerr = _certify(w, lambda u, o: critical_objective(u, sigma, params, order=o), cfg.panel_order)
    return SupremumEstimate(
        value, w, sigma, "critical", its, converged, {"full": abs(full_norm(w, params) - 1.0)},
        f"identity(mu={mu:.17g})", qerr, exploratory=sigma >= params.mu_star, diagnostics={"rows": rows},
    )


@dataclass(frozen=True)
class SweepRow:
    mu_frac: float
    mu: float
    estimate: float
    normalized_product: float
    converged: bool


def sweep_subcritical(mu_fracs: Sequence[float], params: WeightParams, cfg: OptimizerConfig | None = None) -> list[SweepRow]:
    """Subcritical estimates with ``estimate * (1 - (mu/mu*)^{p-1})`` per fraction."""
    cfg = cfg or OptimizerConfig()
    fracs = sorted(float(f) for f in mu_fracs)
    for f in fracs:
        if not 0 < f < 1:
            raise DomainError(f"mu fractions must lie in (0, 1), got {f!r}")
    rows = []
    for f in fracs:
        est = _tmsc_cached(f * params.mu_star, params, cfg)
        prod = est.value * (1.0 - f ** (params.p - 1.0))
        rows.append(SweepRow(f, f * params.mu_star, est.value, prod, est.converged))
    return rows


@dataclass
class ProbeRow:
    sigma_frac: float
    sigma: float
    tmc_estimate: float
    gap: float
    nu: float
    estimate: SupremumEstimate = field(repr=False, compare=False, default=None)


@dataclass
class ProbeReport:
    rows: list
    sigma_star_upper: float | None
    sigma_star_lower: float | None
    nu_monotone: bool
    nu_worst_drop: float
    gap_tolerance: float
    caveat: str


PROBE_CAVEAT = (
    "estimates are attained values, hence lower bounds: a positive gap proves "
    "sigma_* <= sigma_star_upper, while the lower end only reflects what the "
    "optimizer found at this grid resolution"
)


def sigma_star_probe(
    params: WeightParams,
    sigma_grid: Sequence[float],
    cfg: OptimizerConfig | None = None,
    gap_tolerance: float = 1e-6,
) -> ProbeReport:
    """Gap ``TMC - sigma^{p-1}/(p-1)!`` and ``nu(sigma)`` along a grid of absolute ``sigma``.

    Runs are made in increasing ``sigma`` and each argmax seeds the next run;
    an admissible profile stays admissible for larger ``sigma`` and its
    normalized objective only grows, so the estimated ``nu`` is monotone.
    """
    cfg = cfg or OptimizerConfig()
    if not params.integer_regime:
        raise RegimeError(
            f"sigma_* probing needs k0 = p - 1 (integer p); p={params.p!r} gives k0={params.k0}"
        )
    sigmas = sorted(float(s) for s in sigma_grid)
    for s in sigmas:
        if not 0 < s <= params.mu_star:
            raise DomainError(f"sigma grid must lie in (0, mu*], got {s!r}")
    fact = params.fact_pm1()
    rows, warm = [], []
    for s in sigmas:
        est = maximize_tmc(s, params, cfg, warm_starts=tuple(warm))
        lower = s ** (params.p - 1.0) / fact
        rows.append(ProbeRow(s / params.mu_star, s, est.value, est.value - lower, est.value / lower, est))
        warm.append(est.argmax_profile)
    upper = next((r.sigma for r in rows if r.gap > gap_tolerance * (r.sigma ** (params.p - 1.0) / fact)), None)
    lower_b = None
    if upper is not None:
        below = [r.sigma for r in rows if r.sigma < upper]
        lower_b = below[-1] if below else None
    drops = [rows[i].nu - rows[i + 1].nu for i in range(len(rows) - 1)]
    worst = max([0.0] + drops)
    return ProbeReport(rows, upper, lower_b, worst <= 1e-6, worst, gap_tolerance, PROBE_CAVEAT)
