"""Truncated exponential and the Trudinger-Moser functionals.

``phi_p(t) = e^t - sum_{k < k0} t^k / k!``.  Along concentrating sequences the
integrand exceeds double range, so every integral has a log-domain path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ConstraintError, DomainError
from .measure import (
    WeightParams,
    _cap_weight,
    full_norm,
    norm_grad_lp_alpha,
    norm_lq_theta,
    panel_values,
)

LOG_SWITCH = 600.0
NORM_SLACK = 1e-8
_SERIES_TERMS = 200


def exp_tail(t, k: int):
    """``sum_{j >= k} t^j / j!`` for ``t >= 0``, elementwise.

    Below ``t = k + 5`` the ascending series is summed directly, which avoids
    the cancellation in ``e^t`` minus the partial sum.
    """
    t = np.asarray(t, dtype=float)
    if k <= 0:
        return np.exp(t)
    if k == 1:
        return np.expm1(t)
    out = np.empty_like(t)
    small = t < k + 5.0
    if small.any():
        out[small] = _tail_series(t[small], k)
    big = ~small
    if big.any():
        tb = t[big]
        partial = np.zeros_like(tb)
        term = np.ones_like(tb)
        for j in range(k):
            partial += term
            term = term * tb / (j + 1)
        out[big] = np.exp(tb) - partial
    return out


def _tail_ratio(t: np.ndarray, k: int) -> np.ndarray:
    """``exp_tail(t, k) / (t^k / k!) = sum_{m >= 0} t^m k! / (k+m)!``."""
    term = np.ones_like(t)
    total = term.copy()
    for j in range(k + 1, k + _SERIES_TERMS):
        term = term * t / j
        total += term
        if np.all(term <= 1e-17 * total):
            break
    return total


def _tail_series(t: np.ndarray, k: int) -> np.ndarray:
    return t**k / math.factorial(k) * _tail_ratio(t, k)


def log_exp_tail(t, k: int):
    """``log exp_tail(t, k)``; ``-inf`` where ``t == 0`` and ``k > 0``."""
    t = np.asarray(t, dtype=float)
    if k <= 0:
        return t.copy()
    out = np.full_like(t, -np.inf)
    pos = t > 0
    small = pos & (t < k + 5.0)
    if small.any():
        ts = t[small]
        # t^k / k! factored out so tiny t never underflows
        out[small] = k * np.log(ts) - math.lgamma(k + 1.0) + np.log(_tail_ratio(ts, k))
    big = t >= k + 5.0
    if big.any():
        tb = t[big]
        j = np.arange(k)[:, None]
        log_terms = j * np.log(tb)[None, :] - gammaln(j + 1.0) - tb[None, :]
        out[big] = tb + np.log1p(-np.exp(logsumexp(log_terms, axis=0)))
    return out


def phi_p(t, params: WeightParams):
    """Truncated exponential ``phi_p``; accepts scalars or arrays of ``t >= 0``."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("phi_p is defined for t >= 0")
    out = exp_tail(arr, params.k0)
    return float(out) if out.ndim == 0 else out


def phi_p_prime(t, params: WeightParams):
    """``d phi_p / dt = e^t - sum_{k <= k0-2} t^k / k!``."""
    arr = np.asarray(t, dtype=float)
    out = exp_tail(arr, params.k0 - 1)
    return float(out) if out.ndim == 0 else out


def _exponents(u, mu: float, params: WeightParams, order: int):
    rule = u.grid.rule(order)
    vals = np.asarray(u.values, dtype=float)
    t_q = mu * panel_values(vals, rule) ** params.conj
    t_cap = mu * vals[0] ** params.conj
    return rule, t_q, t_cap


def log_tm_integral(u, mu: float, params: WeightParams, order: int = 8) -> float:
    """``log int phi_p(mu |u|^{p/(p-1)}) d lambda_theta``, stable for any size."""
    if not mu >= 0:
        raise DomainError(f"mu must be >= 0, got {mu!r}")
    rule, t_q, t_cap = _exponents(u, mu, params, order)
    k0 = params.k0
    logs = np.concatenate(
        [
            log_exp_tail(np.array([t_cap]), k0) + math.log(_cap_weight(rule.nodes[0], params.theta)),
            log_exp_tail(t_q, k0) + (rule.panels[0] * (params.theta + 1.0) + np.log(rule.panels[3])),
        ]
    )
    if np.all(np.isneginf(logs)):
        return -math.inf
    return math.log(params.omega_theta) + float(logsumexp(logs))


def tm_integral(u, mu: float, params: WeightParams, order: int = 8) -> float:
    """``int phi_p(mu |u|^{p/(p-1)}) d lambda_theta``.

    Evaluated directly while every exponent is at most 600, otherwise through
    :func:`log_tm_integral`; raises ``OverflowError`` if the value itself is
    not representable.
    """
    if not mu >= 0:
        raise DomainError(f"mu must be >= 0, got {mu!r}")
    if mu == 0:
        return 0.0
    rule, t_q, t_cap = _exponents(u, mu, params, order)
    if max(t_cap, float(t_q.max(initial=0.0))) <= LOG_SWITCH:
        k0 = params.k0
        cap = float(exp_tail(np.array([t_cap]), k0)[0]) * _cap_weight(rule.nodes[0], params.theta)
        inner = float(np.dot(rule.weights(params.theta), exp_tail(t_q, k0)))
        return params.omega_theta * (cap + inner)
    return math.exp(log_tm_integral(u, mu, params, order))


def subcritical_objective(u, mu: float, params: WeightParams, *, log: bool = False, order: int = 8) -> float:
    """``int phi_p(mu |u|^{p/(p-1)}) d lambda_theta / ||u||^p_{L^p_theta}`` for ``||u'|| <= 1``."""
    if u.is_zero():
        raise DomainError("subcritical objective is undefined for the zero profile")
    g = norm_grad_lp_alpha(u, params)
    if g > 1.0 + NORM_SLACK:
        raise ConstraintError(f"||u'||_(L^p_alpha) = {g!r} exceeds 1")
    l = norm_lq_theta(u, params.p, params.theta, order)
    if log:
        return log_tm_integral(u, mu, params, order) - params.p * math.log(l)
    return tm_integral(u, mu, params, order) / l**params.p


def critical_objective(u, sigma: float, params: WeightParams, *, log: bool = False, order: int = 8) -> float:
    """``int phi_p(sigma |u|^{p/(p-1)}) d lambda_theta`` for full norm ``<= 1``."""
    n = full_norm(u, params)
    if n > 1.0 + NORM_SLACK:
        raise ConstraintError(f"full norm {n!r} exceeds 1")
    if log:
        return log_tm_integral(u, sigma, params, order)
    return tm_integral(u, sigma, params, order)


def identity_ratio(mu: float, sigma: float, params: WeightParams) -> float:
    """``(1 - (mu/sigma)^{p-1}) / (mu/sigma)^{p-1}`` for ``0 < mu < sigma``."""
    if not (0.0 < mu < sigma):
        raise DomainError(f"need 0 < mu < sigma, got mu={mu!r}, sigma={sigma!r}")
    rho = (mu / sigma) ** (params.p - 1.0)
    return (1.0 - rho) / rho


@dataclass(frozen=True)
class FunctionalReport:
    """Norms and Trudinger-Moser integral of one profile.

    When ``overflow_flag`` is set, ``tm_integral`` and ``objective`` hold
    natural logarithms of the respective quantities.
    """

    grad_norm_p: float
    lp_theta_norm: float
    full_norm: float
    tm_integral: float
    objective: float
    overflow_flag: bool


def evaluate(u, mu: float, params: WeightParams, kind: str = "critical", order: int = 8) -> FunctionalReport:
    """Report for ``u`` at exponent ``mu``; ``kind`` selects the objective.

    ``critical``: objective is the integral itself.  ``subcritical``: the
    integral divided by ``||u||^p_{L^p_theta}``.  No constraint is enforced.
    """
    if kind not in ("critical", "subcritical"):
        raise DomainError(f"unknown functional kind {kind!r}")
    g = norm_grad_lp_alpha(u, params)
    l = norm_lq_theta(u, params.p, params.theta, order)
    top = max(g, l)
    fn = top * ((g / top) ** params.p + (l / top) ** params.p) ** (1.0 / params.p) if top else 0.0
    _, t_q, t_cap = _exponents(u, mu, params, order)
    overflow = max(t_cap, float(t_q.max(initial=0.0))) > LOG_SWITCH
    if overflow:
        tm = log_tm_integral(u, mu, params, order)
        obj = tm - params.p * math.log(l) if kind == "subcritical" else tm
    else:
        tm = tm_integral(u, mu, params, order)
        obj = (tm / l**params.p if l else math.nan) if kind == "subcritical" else tm
    return FunctionalReport(g, l, fn, tm, obj, overflow)
