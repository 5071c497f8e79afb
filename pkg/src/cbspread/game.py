"""The zero-sum source game: cost surface, sign functions and the pure equilibrium.

Georgia picks ``g`` in ``[0, s_min]`` to minimize the centrality-weighted
steady-state opinion ``f(g, h)``; Hank picks ``h`` in ``[s_max, 1]`` to
maximize it. All scalar functions here accept numpy arrays for ``g``/``h``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import BiasParams, Scenario, SourcePair, steady_state_closed_form
from .errors import AssumptionError, DomainError, ValidationError
from .network import row_sums
from .spectral import SpectralData, dominant_eigenpair

TIE_TOL = 1e-12
ROOT_TOL = 1e-12


@dataclass(frozen=True)
class GameScalars:
    lam: float
    s_hat: float
    chi: float
    c_sum: float
    s_min: float
    s_max: float


class Branch(str, enum.Enum):
    NoCB = "NoCB"
    M01NonNeg_Q01NonNeg = "M01NonNeg_Q01NonNeg"
    M01NonNeg_QatSbarNonPos = "M01NonNeg_QatSbarNonPos"
    M01NonNeg_Interior_r0 = "M01NonNeg_Interior_r0"
    MsLow1NonPos = "MsLow1NonPos"
    Interior_w1 = "Interior_w1"


@dataclass(frozen=True)
class EquilibriumResult:
    g_star: float
    h_star: float
    branch: Branch
    f_value: float
    cb_moved_georgia: bool
    cb_moved_hank: bool
    boundary_tie: bool = False
    clamped: bool = False
    raw_root: float | None = None
    # cost recomputed as c^T x*(g*, h*) when a network was available
    f_dynamics: float | None = None

    @property
    def point(self) -> tuple[float, float]:
        return self.g_star, self.h_star


def game_scalars(scn: Scenario, spec: SpectralData) -> GameScalars:
    c_hat = spec.c_hat
    s = scn.s
    return GameScalars(
        lam=spec.lam,
        s_hat=float(c_hat @ s),
        chi=float(c_hat @ (s * row_sums(scn.net))),
        c_sum=spec.c_sum,
        s_min=scn.s_min,
        s_max=scn.s_max,
    )


def _denominator(gs, bias, g, h):
    return 1.0 - gs.lam + (g - h) * bias.gamma


def cost(gs: GameScalars, bias: BiasParams, g, h):
    den = _denominator(gs, bias, g, h)
    if np.any(np.asarray(den) <= 0):
        raise AssumptionError("cost denominator 1 - lambda + (g - h) gamma is not positive")
    b, y = bias.beta, bias.gamma
    num = (1 - 2 * b + (h - g) * y) * gs.s_hat - gs.chi + (h + g) * b + (g * g - h * h) * y
    return num / den * gs.c_sum


def q_fn(gs: GameScalars, bias: BiasParams, g, h):
    """Numerator of df/dh: Hank gains by raising h exactly where this is positive."""
    b, y = bias.beta, bias.gamma
    a1 = 1 - gs.lam + y * g
    b1 = (1 - 2 * b - g * y) * gs.s_hat - gs.chi + g * b + g * g * y
    return (b + y * gs.s_hat - 2 * y * h) * a1 + b1 * y + y * y * h * h


def m_fn(gs: GameScalars, bias: BiasParams, g, h):
    """Numerator of df/dg: Georgia gains by lowering g where this is positive."""
    b, y = bias.beta, bias.gamma
    a2 = 1 - gs.lam - h * y
    b2 = (1 - 2 * b + h * y) * gs.s_hat + h * b - h * h * y - gs.chi
    return (b - y * gs.s_hat + 2 * y * g) * a2 + g * g * y * y - b2 * y


def partial_f_h(gs, bias, g, h):
    den = _denominator(gs, bias, g, h)
    if np.any(np.asarray(den) <= 0):
        raise AssumptionError("cost denominator is not positive")
    return q_fn(gs, bias, g, h) * gs.c_sum / den**2


def partial_f_g(gs, bias, g, h):
    den = _denominator(gs, bias, g, h)
    if np.any(np.asarray(den) <= 0):
        raise AssumptionError("cost denominator is not positive")
    return m_fn(gs, bias, g, h) * gs.c_sum / den**2


def _sqrt_checked(radicand, what):
    if radicand < 0:
        if radicand > -1e-14:
            return 0.0
        raise DomainError(f"{what}: negative radicand {radicand:.3e}")
    return math.sqrt(radicand)


def _need_gamma(bias, what):
    if bias.gamma == 0:
        raise DomainError(f"{what} is undefined for gamma = 0")


def r_fn(gs: GameScalars, bias: BiasParams, g: float) -> float:
    """Root in h of q(g, .) = 0 on the decreasing branch."""
    _need_gamma(bias, "r(g)")
    b, y, lam = bias.beta, bias.gamma, gs.lam
    rad = ((1 - lam) * (1 - lam - b + 2 * g * y) - (2 - lam - 2 * b) * y * gs.s_hat
           - 2 * g * b * y + y * gs.chi)
    return -_sqrt_checked(rad, "r(g)") / y + (1 - lam) / y + g


def w_fn(gs: GameScalars, bias: BiasParams, h: float) -> float:
    """Root in g of m(., h) = 0 on the increasing branch."""
    _need_gamma(bias, "w(h)")
    b, y, lam = bias.beta, bias.gamma, gs.lam
    rad = ((1 - lam) * (1 - lam - 2 * h * y - b) + (2 - lam - 2 * b) * y * gs.s_hat
           + 2 * h * b * y - gs.chi * y)
    return _sqrt_checked(rad, "w(h)") / y - (1 - lam) / y + h


def delta_fn(gs: GameScalars, bias: BiasParams, g: float) -> float:
    """Root in h of m(g, .) = 0 on the decreasing branch.

    m(g, h) = gamma^2 h^2 - 2 gamma (beta + gamma g) h + const, so the
    smaller root is g + beta/gamma - sqrt(...)/gamma.
    """
    _need_gamma(bias, "delta(g)")
    b, y, lam = bias.beta, bias.gamma, gs.lam
    rad = (b + 2 * g * y) * (b + lam - 1) - (lam + 2 * b - 2) * gs.s_hat * y - gs.chi * y
    return g + b / y - _sqrt_checked(rad, "delta(g)") / y


def _bisect(fn, lo, hi, tol=ROOT_TOL, max_iter=200):
    flo = fn(lo)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish(fn, guess, lo, hi):
    """Clamp ``guess`` to [lo, hi] and refine it by bisection on ``fn``."""
    clamped = not (lo <= guess <= hi)
    x = min(max(guess, lo), hi)
    width = 1e-6
    a, b = max(lo, x - width), min(hi, x + width)
    if fn(a) * fn(b) > 0:
        a, b = lo, hi
        if fn(a) * fn(b) > 0:
            return x, clamped
    return _bisect(fn, a, b), clamped


def _check_bias(gs, bias):
    if not bias.beta >= bias.gamma >= 0:
        raise AssumptionError("beta >= gamma >= 0 violated")
    if 1 - gs.lam < max(2 * bias.beta, 4 * bias.gamma):
        raise AssumptionError("1 - lambda >= max(2 beta, 4 gamma) violated")


def cb_influence(gs: GameScalars, bias: BiasParams, tie_tol: float = TIE_TOL) -> tuple[bool, bool]:
    """(Georgia moved off 0, Hank moved off 1) at equilibrium."""
    if bias.gamma == 0:
        return False, False
    return bool(m_fn(gs, bias, 0.0, 1.0) < -tie_tol), bool(q_fn(gs, bias, 0.0, 1.0) < -tie_tol)


def georgia_shift_condition(gs: GameScalars, bias: BiasParams) -> bool:
    """Closed inequality chain equivalent to m(0, 1) < 0."""
    b, y, lam, sh, chi = bias.beta, bias.gamma, gs.lam, gs.s_hat, gs.chi
    if b <= 0:
        return False
    den = 2 * sh - lam * sh - y - chi
    if den == 0:
        return False
    ratio = (1 - lam - 2 * y + 2 * sh * y) / den
    return bool(0 < ratio < y / b <= 1)


def hank_shift_condition(gs: GameScalars, bias: BiasParams) -> bool:
    """Closed inequality chain equivalent to q(0, 1) < 0."""
    b, y, lam, sh, chi = bias.beta, bias.gamma, gs.lam, gs.s_hat, gs.chi
    if b <= 0:
        return False
    den = 2 - 2 * lam - 2 * sh + sh * lam + 2 * b * sh + chi - y
    if den == 0:
        return False
    ratio = (1 - lam) / den
    return bool(0 < ratio < y / b <= 1)


def nash_equilibrium(gs: GameScalars, bias: BiasParams, tie_tol: float = TIE_TOL) -> EquilibriumResult:
    _check_bias(gs, bias)
    s_lo, s_hi = gs.s_min, gs.s_max
    tie = False
    clamped = False
    raw = None

    def nonneg(v):
        nonlocal tie
        if abs(v) <= tie_tol:
            tie = True
            return True
        return v > 0

    def nonpos(v):
        nonlocal tie
        if abs(v) <= tie_tol:
            tie = True
            return True
        return v < 0

    if bias.gamma == 0:
        g, h, branch = 0.0, 1.0, Branch.NoCB
    elif nonneg(m_fn(gs, bias, 0.0, 1.0)):
        if nonneg(q_fn(gs, bias, 0.0, 1.0)):
            g, h, branch = 0.0, 1.0, Branch.M01NonNeg_Q01NonNeg
        elif nonpos(q_fn(gs, bias, 0.0, s_hi)):
            g, h, branch = 0.0, s_hi, Branch.M01NonNeg_QatSbarNonPos
        else:
            raw = r_fn(gs, bias, 0.0)
            h, clamped = _polish(lambda t: q_fn(gs, bias, 0.0, t), raw, s_hi, 1.0)
            g, branch = 0.0, Branch.M01NonNeg_Interior_r0
    elif nonpos(m_fn(gs, bias, s_lo, 1.0)):
        g, h, branch = s_lo, 1.0, Branch.MsLow1NonPos
    else:
        raw = w_fn(gs, bias, 1.0)
        g, clamped = _polish(lambda t: m_fn(gs, bias, t, 1.0), raw, 0.0, s_lo)
        h, branch = 1.0, Branch.Interior_w1

    moved_g, moved_h = cb_influence(gs, bias, tie_tol)
    return EquilibriumResult(
        g_star=float(g), h_star=float(h), branch=branch,
        f_value=float(cost(gs, bias, g, h)),
        cb_moved_georgia=moved_g, cb_moved_hank=moved_h,
        boundary_tie=tie, clamped=clamped, raw_root=raw,
    )


def solve_scenario(scn: Scenario, spec: SpectralData | None = None, rel_tol: float = 1e-7) -> EquilibriumResult:
    """Equilibrium of a full scenario, with the cost cross-checked through the steady state."""
    if spec is None:
        spec = dominant_eigenpair(scn.net)
    gs = game_scalars(scn, spec)
    res = nash_equilibrium(gs, scn.bias)
    x = steady_state_closed_form(scn, SourcePair(res.g_star, res.h_star))
    f_dyn = float(spec.c @ x)
    if abs(f_dyn - res.f_value) > rel_tol * max(abs(res.f_value), 1e-300):
        warnings.warn(
            f"cost mismatch: closed form {res.f_value!r} vs c^T x* {f_dyn!r}",
            RuntimeWarning, stacklevel=2,
        )
    return EquilibriumResult(**{**res.__dict__, "f_dynamics": f_dyn})


def _profile(gs: GameScalars) -> str:
    if gs.s_min == gs.s_max == 0.5:
        return "neutral"
    if gs.s_max == 0.0:
        return "zeros"
    if gs.s_min == 1.0:
        return "ones"
    raise ValidationError("innate opinions are not all 1/2, all 0, or all 1")


def corollary_specials(gs: GameScalars, bias: BiasParams) -> EquilibriumResult:
    """Equilibrium from the dedicated formulas for uniform 1/2, 0 or 1 innate opinions.

    Kept independent of :func:`nash_equilibrium` so the two can be compared.
    """
    kind = _profile(gs)
    b, y, lam, chi = bias.beta, bias.gamma, gs.lam, gs.chi
    if kind == "neutral":
        g, h, branch = 0.0, 1.0, Branch.M01NonNeg_Q01NonNeg
    elif kind == "zeros":
        q01 = (y - chi) * y + (b - 2 * y) * (1 - lam)
        q00 = b - b * lam - chi * y
        if q01 >= -TIE_TOL:
            g, h, branch = 0.0, 1.0, Branch.M01NonNeg_Q01NonNeg
        elif q00 <= TIE_TOL:
            g, h, branch = 0.0, 0.0, Branch.M01NonNeg_QatSbarNonPos
        else:
            rad = (1 - lam) * (1 - lam - b) + chi * y
            g, h, branch = 0.0, (1 - lam - _sqrt_checked(rad, "r~(0)")) / y, Branch.M01NonNeg_Interior_r0
    else:
        m11 = chi * y + b - b * lam - lam * y
        m01 = b - lam * b + (lam + y + chi - 2) * y
        if m01 >= -TIE_TOL:
            g, h, branch = 0.0, 1.0, Branch.M01NonNeg_Q01NonNeg
        elif m11 <= TIE_TOL:
            g, h, branch = 1.0, 1.0, Branch.MsLow1NonPos
        else:
            rad = 1 - b + (lam + y + b - 2) * lam - chi * y
            g, h, branch = (lam + y - 1 + _sqrt_checked(rad, "w^(1)")) / y, 1.0, Branch.Interior_w1
    moved_g, moved_h = cb_influence(gs, bias)
    return EquilibriumResult(
        g_star=float(g), h_star=float(h), branch=branch,
        f_value=float(cost(gs, bias, g, h)),
        cb_moved_georgia=moved_g, cb_moved_hank=moved_h,
    )
