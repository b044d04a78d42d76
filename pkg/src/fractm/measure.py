"""Radial measure in fractional dimension.

The measure is ``d lambda_theta = omega_theta r^theta dr`` on ``(0, R]``.
Quadrature panels live in log-radius ``s = ln r``: on each cell the
integrand ``f(e^s) e^{(theta+1) s}`` is smooth, and for profiles that are
linear in ``s`` it is a polynomial times an exponential, which Gauss-Legendre
resolves to machine precision on the cell widths used here.  The cell
``(0, r_1]`` uses Gauss-Jacobi with weight ``r^theta``, exact for polynomial
integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError, EvaluationError, RegimeError

# Gauss-Jacobi for large theta loses accuracy; beyond this we fall back to
# the moment-exact constant rule (profiles are constant on the first cell).
_JACOBI_MAX_BETA = 60.0


def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma_fn needs a finite x > 0, got {x!r}")
    return math.gamma(x)


def omega(theta: float) -> float:
    """Fractional spherical volume coefficient ``2 pi^{(theta+1)/2} / Gamma((theta+1)/2)``."""
    theta = float(theta)
    if not theta >= 0 or not math.isfinite(theta):
        raise DomainError(f"omega needs a finite theta >= 0, got {theta!r}")
    h = 0.5 * (theta + 1.0)
    return 2.0 * math.pi**h / gamma_fn(h)


def ball_volume(radius: float, theta: float) -> float:
    """``|B_R|_theta = omega_theta R^{theta+1} / (theta+1)``."""
    if not radius > 0:
        raise DomainError(f"ball radius must be positive, got {radius!r}")
    return omega(theta) * radius ** (theta + 1.0) / (theta + 1.0)


@dataclass(frozen=True)
class WeightParams:
    """Exponent bundle ``(p, alpha, theta)`` restricted to ``alpha = p - 1``.

    ``k0`` is the number of Taylor terms removed from the exponential and
    ``mu_star`` the sharp exponent ``(theta+1) omega_alpha^{1/alpha}``.
    """

    p: float
    theta: float
    alpha: float | None = None

    def __post_init__(self):
        p = float(self.p)
        theta = float(self.theta)
        if not (math.isfinite(p) and p >= 2.0):
            raise DomainError(f"p must be >= 2, got {self.p!r}")
        if not (math.isfinite(theta) and theta >= 0.0):
            raise DomainError(f"theta must be >= 0, got {self.theta!r}")
        alpha = p - 1.0 if self.alpha is None else float(self.alpha)
        if abs(alpha - (p - 1.0)) > 1e-12 * p:
            raise RegimeError(
                f"alpha={alpha!r} is not p-1={p - 1.0!r}; only the "
                "Trudinger-Moser regime alpha = p - 1 is supported"
            )
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", p - 1.0)

    @property
    def k0(self) -> int:
        return int(math.ceil(self.p - 1.0))

    @property
    def conj(self) -> float:
        """Conjugate exponent ``p/(p-1)`` applied to ``|u|`` inside the exponential."""
        return self.p / (self.p - 1.0)

    @property
    def omega_alpha(self) -> float:
        return omega(self.alpha)

    @property
    def omega_theta(self) -> float:
        return omega(self.theta)

    @property
    def mu_star(self) -> float:
        return (self.theta + 1.0) * self.omega_alpha ** (1.0 / self.alpha)

    @property
    def integer_regime(self) -> bool:
        """True when ``k0 == p - 1``, i.e. ``p`` is an integer."""
        return abs(self.k0 - (self.p - 1.0)) <= 1e-12

    def fact_pm1(self) -> float:
        """``(p-1)!`` as ``Gamma(p)``."""
        return gamma_fn(self.p)


@lru_cache(maxsize=None)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


@lru_cache(maxsize=None)
def _jacobi_unit(order: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    # nodes/weights for int_0^1 g(x) x^theta dx
    y, w = roots_jacobi(order, 0.0, theta)
    return 0.5 * (y + 1.0), w * 0.5 ** (theta + 1.0)


class QuadratureRule:
    """Composite Gauss rule on the cells of a radial node set.

    ``nodes`` are the cell boundaries ``r_1 < ... < r_N``; the cell
    ``(0, r_1]`` is integrated separately.  ``r_min_cutoff`` records the
    smallest resolved radius, which is ``r_1`` unless given.
    """

    def __init__(self, nodes, panel_order: int = 8, r_min_cutoff: float | None = None):
        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DomainError("a quadrature rule needs at least two nodes")
        if not np.all(np.isfinite(nodes)) or nodes[0] <= 0:
            raise DomainError("quadrature nodes must be finite and positive")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("quadrature nodes must be strictly increasing")
        if int(panel_order) < 2:
            raise DomainError(f"panel_order must be >= 2, got {panel_order!r}")
        self.nodes = nodes
        self.nodes.setflags(write=False)
        self.panel_order = int(panel_order)
        self.r_min_cutoff = float(nodes[0] if r_min_cutoff is None else r_min_cutoff)

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @cached_property
    def log_nodes(self) -> np.ndarray:
        return np.log(self.nodes)

    @cached_property
    def panels(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Flattened panel data ``(s, cell, lam, w)`` for all cells.

        ``s`` are log-radii of the Gauss points, ``cell`` the cell index,
        ``lam`` the local coordinate in ``[0, 1]`` and ``w`` the Gauss weight
        in ``ds`` (without the ``e^{(theta+1)s}`` factor).
        """
        x, w = _legendre(self.panel_order)
        s = self.log_nodes
        h = np.diff(s)
        lam = 0.5 * (x + 1.0)
        s_q = s[:-1, None] + h[:, None] * lam[None, :]
        w_q = 0.5 * h[:, None] * w[None, :]
        cell = np.repeat(np.arange(h.size), self.panel_order)
        return (s_q.ravel(), cell, np.tile(lam, h.size), w_q.ravel())

    def weights(self, theta: float) -> np.ndarray:
        """Weights for ``int f(r) r^theta dr`` at the panel points (no omega factor)."""
        s_q, _, _, w_q = self.panels
        return w_q * np.exp((theta + 1.0) * s_q)

    def core(self, theta: float) -> tuple[np.ndarray, np.ndarray]:
        """Points and weights for ``int_0^{r_1} f(r) r^theta dr``."""
        r1 = self.nodes[0]
        if theta > _JACOBI_MAX_BETA:
            return np.array([r1]), np.array([r1 ** (theta + 1.0) / (theta + 1.0)])
        x, w = _jacobi_unit(self.panel_order, float(theta))
        return r1 * x, w * r1 ** (theta + 1.0)

    def refined(self, factor: int = 2) -> "QuadratureRule":
        """Same cells, ``factor`` times the panel order."""
        return QuadratureRule(self.nodes, self.panel_order * factor, self.r_min_cutoff)


def integrate_weighted(f: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule, theta: float) -> float:
    """``omega_theta * int_0^{R_max} f(r) r^theta dr`` by composite Gauss panels.

    ``f`` is called with an array of radii and must return an array of the
    same shape.  A non-finite value raises :class:`EvaluationError` carrying
    the first offending radius.
    """
    r_core, w_core = rule.core(theta)
    s_q = rule.panels[0]
    r_q = np.exp(s_q)
    r_all = np.concatenate([r_core, r_q])
    vals = np.asarray(f(r_all), dtype=float)
    if vals.shape != r_all.shape:
        vals = np.broadcast_to(vals, r_all.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        raise EvaluationError("non-finite integrand value", float(r_all[np.argmax(bad)]))
    w_all = np.concatenate([w_core, rule.weights(theta)])
    return omega(theta) * math.fsum(w_all * vals)


def _cap_weight(r1: float, theta: float) -> float:
    return r1 ** (theta + 1.0) / (theta + 1.0)


def panel_values(values: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    """Values of the log-linear interpolant of nodal ``values`` at the panel points."""
    _, cell, lam, _ = rule.panels
    return (1.0 - lam) * values[cell] + lam * values[cell + 1]


def profile_integral(values, rule: QuadratureRule, theta: float, g: Callable[[np.ndarray], np.ndarray]) -> float:
    """``omega_theta int g(u) r^theta dr`` for the profile with nodal ``values``.

    The profile is constant on ``(0, r_1]``, so that cell is exact.
    """
    values = np.asarray(values, dtype=float)
    inner = g(panel_values(values, rule))
    cap = float(g(values[:1])[0]) * _cap_weight(rule.nodes[0], theta)
    return omega(theta) * (cap + float(np.dot(rule.weights(theta), inner)))


def _profile_parts(u):
    grid = getattr(u, "grid", None)
    if grid is None:
        raise DomainError("expected a RadialProfile")
    return np.asarray(u.values, dtype=float), grid


def norm_lq_theta(u, q: float, theta: float, order: int = 8) -> float:
    """Weighted Lebesgue norm ``(int |u|^q d lambda_theta)^{1/q}``."""
    if not q >= 1:
        raise DomainError(f"q must be >= 1, got {q!r}")
    v, grid = _profile_parts(u)
    top = float(np.max(np.abs(v)))
    if top == 0.0:
        return 0.0
    rule = grid.rule(order)
    # factor out the peak so large q never overflows
    integral = profile_integral(v / top, rule, theta, lambda x: np.abs(x) ** q)
    return top * integral ** (1.0 / q)


def grad_energy(values, log_nodes, p: float, omega_alpha: float) -> float:
    """``||u'||^p`` in ``L^p_alpha`` for a log-linear profile, ``alpha = p - 1``.

    On a cell ``u' = b / r`` with ``b`` the log-slope, and
    ``|u'|^p r^{p-1} = |b|^p / r`` integrates to ``|b|^p ds``.
    """
    dv = np.abs(np.diff(values))
    ds = np.diff(log_nodes)
    return omega_alpha * float(np.sum(dv**p / ds ** (p - 1.0)))


def norm_grad_lp_alpha(u, params: WeightParams) -> float:
    """``||u'||_{L^p_alpha}`` computed in closed form cell by cell."""
    v, grid = _profile_parts(u)
    top = float(np.max(np.abs(v)))
    if top == 0.0:
        return 0.0
    e = grad_energy(v / top, grid.rule().log_nodes, params.p, params.omega_alpha)
    return top * e ** (1.0 / params.p)


def full_norm(u, params: WeightParams) -> float:
    """``(||u||^p_{L^p_theta} + ||u'||^p_{L^p_alpha})^{1/p}``."""
    g = norm_grad_lp_alpha(u, params)
    l = norm_lq_theta(u, params.p, params.theta)
    top = max(g, l)
    if top == 0.0:
        return 0.0
    return top * ((g / top) ** params.p + (l / top) ** params.p) ** (1.0 / params.p)
