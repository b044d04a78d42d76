"""Radial profiles, node grids, explicit test families and scaling transforms.

A profile is non-increasing, nonnegative, linear in ``ln r`` between grid
nodes, constant on ``(0, r_1]`` and zero from the last node on.  Dilations
``u(tau r)`` act on the nodes (``r_i -> r_i / tau``) rather than on the
values, so every transform here is exact: no resampling takes place.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DomainError, ResolutionError
from .measure import (
    QuadratureRule,
    WeightParams,
    full_norm,
    norm_grad_lp_alpha,
    norm_lq_theta,
)

MIN_NODES = 16


class RadialGrid:
    """Strictly increasing positive radii ``r_1 < ... < r_N = R_max``."""

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise ResolutionError(f"a radial grid needs at least {MIN_NODES} nodes, got {nodes.size}")
        if not np.all(np.isfinite(nodes)) or nodes[0] <= 0:
            raise DomainError("grid nodes must be finite and positive")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        self.nodes = nodes
        self._rules: dict[int, QuadratureRule] = {}

    @classmethod
    def log_uniform(
        cls,
        n_nodes: int = 512,
        r_min: float = 1e-10,
        r_max: float = 10.0,
        focus: float | None = None,
        n_focus: int = 128,
    ) -> "RadialGrid":
        """Log-spaced nodes on ``[r_min, r_max]``.

        With ``focus`` (a concentration radius such as a Moser knee), the range
        is extended down to ``focus / e^2`` if needed, ``n_focus`` extra nodes
        are packed in ``[focus / e^2, focus]`` and ``focus`` itself becomes a node.
        """
        if not 0 < r_min < r_max:
            raise DomainError(f"need 0 < r_min < r_max, got {r_min!r}, {r_max!r}")
        lo = r_min
        parts = []
        if focus is not None:
            if not 0 < focus < r_max:
                raise DomainError(f"focus radius must lie in (0, r_max), got {focus!r}")
            lo = min(lo, focus * math.exp(-2.0))
            parts.append(np.geomspace(focus * math.exp(-2.0), focus, n_focus))
            parts.append(np.array([focus]))
        parts.append(np.geomspace(lo, r_max, n_nodes))
        return cls(_merge(np.concatenate(parts)))

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def rule(self, order: int = 8) -> QuadratureRule:
        rule = self._rules.get(order)
        if rule is None:
            rule = self._rules[order] = QuadratureRule(self.nodes, order)
        return rule

    def scaled(self, factor: float) -> "RadialGrid":
        """Grid with every node multiplied by ``factor``."""
        return RadialGrid(self.nodes * factor)

    def with_nodes(self, extra) -> "RadialGrid":
        """Grid with ``extra`` radii inserted (duplicates dropped)."""
        return RadialGrid(_merge(np.concatenate([self.nodes, np.atleast_1d(extra)])))

    def __eq__(self, other):
        return isinstance(other, RadialGrid) and np.array_equal(self.nodes, other.nodes)

    def __hash__(self):
        return hash(self.nodes.tobytes())

    def __repr__(self):
        return f"RadialGrid(N={self.size}, r_1={self.nodes[0]:.3e}, R_max={self.r_max:.3e})"


def _merge(r: np.ndarray) -> np.ndarray:
    r = np.unique(r)
    # drop near-duplicates that would create degenerate cells
    keep = np.concatenate([[True], np.diff(np.log(r)) > 1e-12])
    return r[keep]


@lru_cache(maxsize=8)
def default_grid(n_nodes: int = 512, r_min: float = 1e-10, r_max: float = 10.0) -> RadialGrid:
    return RadialGrid.log_uniform(n_nodes, r_min, r_max)


def project_monotone(values) -> np.ndarray:
    """Euclidean projection onto non-increasing, nonnegative vectors ending in 0.

    Pool-adjacent-violators for the decreasing fit, then clipping.
    """
    y = np.asarray(values, dtype=float)
    means: list[float] = []
    counts: list[int] = []
    for x in y:
        means.append(float(x))
        counts.append(1)
        while len(means) > 1 and means[-2] < means[-1]:
            m2, c2 = means.pop(), counts.pop()
            m1, c1 = means.pop(), counts.pop()
            means.append((m1 * c1 + m2 * c2) / (c1 + c2))
            counts.append(c1 + c2)
    out = np.repeat(means, counts)
    out = np.maximum(out, 0.0)
    out[-1] = 0.0
    return out


class RadialProfile:
    """Non-increasing nonnegative radial function on a :class:`RadialGrid`.

    ``values[i]`` is the value at ``grid.nodes[i]``; the function is linear in
    ``ln r`` between nodes, equals ``values[0]`` on ``(0, r_1]`` and vanishes
    for ``r >= R_max``.
    """

    def __init__(self, grid: RadialGrid, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.size,):
            raise DomainError(f"expected {grid.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("profile values must be finite")
        if np.any(values < 0):
            raise DomainError("profile values must be nonnegative")
        if np.any(np.diff(values) > 0):
            raise DomainError("profile values must be non-increasing")
        if values[-1] != 0.0:
            raise DomainError("profile must vanish at R_max")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def from_samples(cls, grid: RadialGrid, values) -> "RadialProfile":
        """Build a profile from arbitrary samples by monotone projection."""
        return cls(grid, project_monotone(values))

    @classmethod
    def from_function(cls, grid: RadialGrid, f) -> "RadialProfile":
        vals = np.asarray(f(grid.nodes), dtype=float)
        return cls.from_samples(grid, vals)

    @property
    def left_cap(self) -> float:
        return float(self.values[0])

    @property
    def r_max(self) -> float:
        return self.grid.r_max

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        s = np.log(np.maximum(r, self.grid.nodes[0]))
        out = np.interp(s, self.grid.rule().log_nodes, self.values, right=0.0)
        return np.where(r >= self.r_max, 0.0, out)

    def __repr__(self):
        return f"RadialProfile({self.grid!r}, cap={self.left_cap:.6g})"


# -- test families ---------------------------------------------------------


def moser_knee(n: float, params: WeightParams) -> float:
    return math.exp(-n / (params.theta + 1.0))


def moser_value(r, n: float, params: WeightParams):
    """Exact Moser function ``u_n(r)``."""
    r = np.asarray(r, dtype=float)
    a = params.theta + 1.0
    scale = params.omega_alpha ** (-1.0 / params.p)
    cap = scale * (n / a) ** ((params.p - 1.0) / params.p)
    slope = scale * (a / n) ** (1.0 / params.p)
    knee = math.exp(-n / a)
    out = np.where(r <= knee, cap, slope * np.log(1.0 / np.maximum(r, 1e-300)))
    return np.where(r >= 1.0, 0.0, out)


def moser_grid(n: float, params: WeightParams, n_nodes: int = 512, r_max: float = 10.0) -> RadialGrid:
    """Default grid for ``u_n``: log-uniform, knee as focus, 1 as a node."""
    knee = moser_knee(n, params)
    grid = RadialGrid.log_uniform(n_nodes, min(1e-10, knee), r_max, focus=knee)
    return grid.with_nodes(1.0)


def make_moser(n: int, params: WeightParams, grid: RadialGrid | None = None) -> RadialProfile:
    """Moser concentration profile ``u_n``, exactly represented.

    The knee ``e^{-n/(theta+1)}`` and ``r = 1`` are inserted as nodes, so the
    log-linear interpolant coincides with ``u_n`` everywhere.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"Moser index must be a positive integer, got {n!r}")
    n = int(n)
    if grid is None:
        grid = moser_grid(n, params)
    knee = moser_knee(n, params)
    below = int(np.sum(grid.nodes < knee))
    if below < 8:
        raise ResolutionError(
            f"grid has {below} nodes below the knee r={knee:.3e}; at least 8 are required "
            f"(use r_min <= {knee * math.exp(-2.0):.3e} or RadialGrid.log_uniform(focus=knee))"
        )
    if grid.r_max < 1.0:
        raise ResolutionError(f"Moser profiles need R_max >= 1, grid has {grid.r_max!r}")
    grid = grid.with_nodes([knee, 1.0])
    return RadialProfile(grid, moser_value(grid.nodes, n, params))


def rescale(u: RadialProfile, zeta: float, tau: float) -> RadialProfile:
    """``r -> zeta * u(tau r)``; nodes become ``r_i / tau``."""
    if not (zeta > 0 and tau > 0 and math.isfinite(zeta) and math.isfinite(tau)):
        raise DomainError(f"zeta and tau must be positive, got {zeta!r}, {tau!r}")
    grid = u.grid if tau == 1.0 else u.grid.scaled(1.0 / tau)
    return RadialProfile(grid, u.values * zeta)


def make_ishiwata(t: float, base: RadialProfile, params: WeightParams) -> RadialProfile:
    """Vanishing family ``xi_t t^{1/p} base(t^{1/(theta+1)} r)``.

    ``xi_t`` restores unit full norm: ``xi_t^{-p} = t ||base'||^p + ||base||^p``,
    which for a unit-norm base is ``t + (1 - t) ||base||^p_{L^p_theta}``.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t!r}")
    p = params.p
    g = norm_grad_lp_alpha(base, params) ** p
    l = norm_lq_theta(base, p, params.theta) ** p
    if abs(g + l - 1.0) > 1e-8:
        raise DomainError(f"base must have unit full norm, has ||u||^p = {g + l!r}")
    xi = (t * g + l) ** (-1.0 / p)
    return rescale(base, xi * t ** (1.0 / p), t ** (1.0 / (params.theta + 1.0)))


def normalize_subcritical(u: RadialProfile, params: WeightParams) -> RadialProfile:
    """Map ``u`` to ``u(tau r) / ||u'||`` with unit gradient and unit ``L^p_theta`` norm."""
    g = norm_grad_lp_alpha(u, params)
    if g == 0.0:
        raise DomainError("cannot normalize the zero profile")
    l = norm_lq_theta(u, params.p, params.theta)
    tau = ((l / g) ** params.p) ** (1.0 / (params.theta + 1.0))
    return rescale(u, 1.0 / g, tau)


def to_critical_boundary(u: RadialProfile, params: WeightParams) -> RadialProfile:
    """``u(tau r) / ||u'||`` with ``tau = ((1 - ||u'||^p)/||u'||^p)^{1/(theta+1)}``.

    The result has unit gradient norm and
    ``||w||^p_{L^p_theta} = ||u||^p_{L^p_theta} / (1 - ||u'||^p)``.
    """
    g = norm_grad_lp_alpha(u, params)
    gp = g**params.p
    if not 0.0 < gp < 1.0:
        raise DomainError(f"transform needs 0 < ||u'|| < 1, got ||u'||^p = {gp!r}")
    tau = ((1.0 - gp) / gp) ** (1.0 / (params.theta + 1.0))
    return rescale(u, 1.0 / g, tau)


def unit_full_norm(u: RadialProfile, params: WeightParams) -> RadialProfile:
    """Amplitude scaling to ``||u|| = 1``."""
    n = full_norm(u, params)
    if n == 0.0:
        raise DomainError("cannot normalize the zero profile")
    return rescale(u, 1.0 / n, 1.0)


def tent(grid: RadialGrid, width: float = 1.0) -> RadialProfile:
    """Samples of ``(1 - r/width)_+``."""
    return RadialProfile.from_function(grid, lambda r: np.maximum(1.0 - r / width, 0.0))


def bump(grid: RadialGrid, width: float = 1.0) -> RadialProfile:
    """Samples of ``exp(-(r/width)^2)`` cut to zero at ``R_max``."""
    return RadialProfile.from_function(grid, lambda r: np.exp(-((r / width) ** 2)))


def radial_decay_constant(params: WeightParams) -> float:
    """Conservative constant in ``r^a |u(r)|^p <= C ||u||^p``, ``a = (alpha + theta(p-1))/p``."""
    return params.p * max(1.0, 1.0 / params.omega_theta, 1.0 / params.omega_alpha)


def radial_decay_ratio(u: RadialProfile, params: WeightParams) -> np.ndarray:
    """``r^a |u(r)|^p / ||u||^p`` at every node."""
    a = (params.alpha + params.theta * (params.p - 1.0)) / params.p
    return u.grid.nodes**a * u.values**params.p / full_norm(u, params) ** params.p


# -- serialization -----------------------------------------------------------

_HEADER = re.compile(
    r"#\s*fractm-profile\s+p=(?P<p>\S+)\s+alpha=(?P<alpha>\S+)\s+theta=(?P<theta>\S+)\s+r_max=(?P<r_max>\S+)"
)


@dataclass(frozen=True)
class ProfileFile:
    profile: RadialProfile
    params: WeightParams


def dumps_profile(u: RadialProfile, params: WeightParams) -> str:
    lines = [
        f"# fractm-profile p={params.p:.17g} alpha={params.alpha:.17g} "
        f"theta={params.theta:.17g} r_max={u.r_max:.17g}",
        "# radius value",
    ]
    lines += [f"{r:.17g} {v:.17g}" for r, v in zip(u.grid.nodes, u.values)]
    return "\n".join(lines) + "\n"


def loads_profile(text: str) -> ProfileFile:
    lines = text.splitlines()
    m = _HEADER.match(lines[0]) if lines else None
    if m is None:
        raise ValueError("missing fractm-profile header line")
    params = WeightParams(float(m["p"]), float(m["theta"]), float(m["alpha"]))
    rows = [ln.split() for ln in lines[1:] if ln.strip() and not ln.startswith("#")]
    data = np.array(rows, dtype=float)
    grid = RadialGrid(data[:, 0])
    if grid.r_max != float(m["r_max"]):
        raise ValueError("header r_max does not match the last radius")
    return ProfileFile(RadialProfile(grid, data[:, 1]), params)


def save_profile(path, u: RadialProfile, params: WeightParams) -> None:
    Path(path).write_text(dumps_profile(u, params))


def load_profile(path) -> ProfileFile:
    return loads_profile(Path(path).read_text())
