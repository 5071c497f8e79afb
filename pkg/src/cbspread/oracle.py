"""Brute-force checks that do not rely on the closed-form equilibrium."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import BiasParams, Scenario
from .errors import InconsistencyError, IterationLimitError, ValidationError
from .game import cost, game_scalars, partial_f_g, partial_f_h
from .network import SocialNetwork
from .spectral import SpectralData

_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class GridSpec:
    g_points: int = 400
    h_points: int = 400

    def axes(self, s_min: float, s_max: float):
        g = np.linspace(0.0, s_min, self.g_points) if s_min > 0 else np.array([0.0])
        h = np.linspace(s_max, 1.0, self.h_points) if s_max < 1 else np.array([1.0])
        if (s_min > 0 and self.g_points < 2) or (s_max < 1 and self.h_points < 2):
            raise ValidationError("a nondegenerate strategy interval needs at least 2 grid points")
        return g, h


def _grid_step(axis):
    return axis[1] - axis[0] if axis.size > 1 else 0.0


def grid_saddle(scn: Scenario, spec: SpectralData, grid: GridSpec = GridSpec()):
    """Saddle point of the cost on a uniform grid over both strategy intervals.

    Returns ``(g, h, f)``. Raises InconsistencyError when the max-min and
    min-max grid values differ by more than the discretization allows.
    """
    gs = game_scalars(scn, spec)
    bias = scn.bias
    g_ax, h_ax = grid.axes(gs.s_min, gs.s_max)
    G, H = np.meshgrid(g_ax, h_ax, indexing="ij")
    F = cost(gs, bias, G, H)

    worst_h = F.max(axis=1)      # Hank's best reply value for each g
    worst_g = F.min(axis=0)      # Georgia's best reply value for each h
    i = int(np.argmin(worst_h))
    j = int(np.argmax(worst_g))
    minmax, maxmin = worst_h[i], worst_g[j]

    dg, dh = _grid_step(g_ax), _grid_step(h_ax)
    lip = 0.0
    if dg:
        lip = max(lip, np.abs(np.diff(F, axis=0)).max() / dg)
    if dh:
        lip = max(lip, np.abs(np.diff(F, axis=1)).max() / dh)
    allowed = 2 * lip * max(dg, dh) + 1e-12 * max(1.0, abs(minmax))
    if minmax - maxmin > allowed:
        raise InconsistencyError(
            f"grid max-min {maxmin!r} and min-max {minmax!r} differ by more than {allowed:.3e}"
        )
    return float(g_ax[i]), float(h_ax[j]), float(F[i, j])


def golden_section(fn, lo, hi, tol=1e-12, maximize=False, max_iter=500):
    """Minimizer (or maximizer) of a unimodal ``fn`` on [lo, hi]."""
    if hi - lo <= tol:
        return 0.5 * (lo + hi)
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = sign * fn(x1), sign * fn(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = sign * fn(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = sign * fn(x2)
    x = 0.5 * (a + b)
    # the optimum of a monotone piece sits on the boundary
    cands = [(sign * fn(lo), lo), (sign * fn(x), x), (sign * fn(hi), hi)]
    return min(cands)[1]


def best_response_iteration(scn: Scenario, spec: SpectralData, tol: float = 1e-10,
                            max_rounds: int = 500):
    """Alternate exact best replies (golden section on each axis) until they stop moving."""
    gs = game_scalars(scn, spec)
    bias = scn.bias
    g, h = 0.5 * gs.s_min, 0.5 * (gs.s_max + 1.0)
    inner = tol / 10
    for _ in range(max_rounds):
        g_new = golden_section(lambda t: cost(gs, bias, t, h), 0.0, gs.s_min, inner)
        h_new = golden_section(lambda t: cost(gs, bias, g_new, t), gs.s_max, 1.0, inner, maximize=True)
        moved = abs(g_new - g) + abs(h_new - h)
        g, h = g_new, h_new
        if moved < tol:
            return g, h
    raise IterationLimitError(f"best responses still moving after {max_rounds} rounds", moved)


def no_profitable_deviation(scn: Scenario, spec: SpectralData, g: float, h: float,
                            probes: int = 10_000, slack: float = 1e-10) -> bool:
    gs = game_scalars(scn, spec)
    bias = scn.bias
    f0 = cost(gs, bias, g, h)
    g_probe = np.linspace(0.0, gs.s_min, probes)
    h_probe = np.linspace(gs.s_max, 1.0, probes)
    georgia_ok = np.all(cost(gs, bias, g_probe, h) >= f0 - slack)
    hank_ok = np.all(cost(gs, bias, g, h_probe) <= f0 + slack)
    return bool(georgia_ok and hank_ok)


def finite_diff_check(scn: Scenario, spec: SpectralData, samples: int = 200, seed: int = 0,
                      step: float = 1e-6, floor: float = 1e-4, points=None) -> float:
    """Worst relative gap between analytic partials and finite differences of the cost.

    Relative error is ``|fd - analytic| / max(|analytic|, floor)``. Points
    closer than ``step`` to an interval end use one-sided differences.
    """
    gs = game_scalars(scn, spec)
    bias = scn.bias
    if points is None:
        rng = np.random.default_rng(seed)
        points = zip(rng.uniform(0, gs.s_min, samples), rng.uniform(gs.s_max, 1, samples))
    worst = 0.0
    for g, h in points:
        fd_g = _diff(lambda t: cost(gs, bias, t, h), g, 0.0, gs.s_min, step)
        fd_h = _diff(lambda t: cost(gs, bias, g, t), h, gs.s_max, 1.0, step)
        for fd, an in ((fd_g, partial_f_g(gs, bias, g, h)), (fd_h, partial_f_h(gs, bias, g, h))):
            if fd is None:
                continue
            worst = max(worst, abs(fd - an) / max(abs(an), floor))
    return worst


def _diff(fn, x, lo, hi, step):
    if hi - lo < 2 * step:
        return None
    if x - step < lo:
        return (fn(x + step) - fn(x)) / step
    if x + step > hi:
        return (fn(x) - fn(x - step)) / step
    return (fn(x + step) - fn(x - step)) / (2 * step)


def random_scenario(rng: np.random.Generator, n: int | None = None, density: float | None = None) -> Scenario:
    """A random scenario satisfying the standing assumptions.

    Bias parameters are drawn first; W is then scaled so that
    ``1 - max(||W||_inf, ||W||_1)`` leaves room for them.
    """
    n = int(rng.integers(2, 11)) if n is None else n
    beta = rng.uniform(0.0, 0.2)
    gamma = rng.uniform(0.0, beta)
    budget = 1.0 - max(2 * beta, 4 * gamma)
    target = rng.uniform(0.05, 0.95) * budget
    density = rng.uniform(0.4, 1.0) if density is None else density
    W = rng.uniform(0.1, 1.0, (n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(W, 0.0)
    # a directed cycle keeps the graph strongly connected
    for i in range(n):
        W[i, (i + 1) % n] = max(W[i, (i + 1) % n], 0.1)
    W *= target / max(W.sum(axis=1).max(), W.sum(axis=0).max())
    mode = rng.integers(3)
    if mode == 0:
        s = rng.uniform(0, 1, n)
    elif mode == 1:
        s = rng.beta(0.5, 2.0, n)
    else:
        s = rng.beta(2.0, 0.5, n)
    return Scenario(SocialNetwork(W), s, BiasParams(beta, gamma))
