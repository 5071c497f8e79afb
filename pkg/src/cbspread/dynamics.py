"""Opinion dynamics with two stubborn sources and confirmation-biased weights."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import AssumptionError, IterationLimitError, NumericalError, ValidationError
from .network import SocialNetwork, check_assumption1, row_sums


@dataclass(frozen=True)
class BiasParams:
    beta: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.beta) and np.isfinite(self.gamma)):
            raise ValidationError("bias parameters must be finite")
        if self.gamma < 0:
            raise ValidationError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class SourcePair:
    g: float  # Georgia, pulls opinions towards 0
    h: float  # Hank, pulls opinions towards 1


@dataclass(frozen=True)
class OpinionState:
    x: np.ndarray
    k: int = 0


@dataclass(frozen=True)
class Scenario:
    net: SocialNetwork
    s: np.ndarray
    bias: BiasParams

    def __post_init__(self):
        s = np.array(self.s, dtype=float).reshape(-1)
        if s.shape != (self.net.n,):
            raise ValidationError(f"innate opinions: expected {self.net.n} values, got {s.size}")
        if np.any((s < 0) | (s > 1)) or not np.all(np.isfinite(s)):
            raise ValidationError("innate opinions must lie in [0, 1]")
        s.setflags(write=False)
        object.__setattr__(self, "s", s)

    @property
    def s_min(self) -> float:
        return float(self.s.min())

    @property
    def s_max(self) -> float:
        return float(self.s.max())

    def validate_pair(self, pair: SourcePair) -> None:
        """Raise unless ``1 >= h >= s_max >= s_min >= g >= 0``."""
        g, h = pair.g, pair.h
        if not h <= 1:
            raise ValidationError(f"h = {h} violates h <= 1")
        if not h >= self.s_max:
            raise ValidationError(f"h = {h} violates h >= s_max = {self.s_max}")
        if not g <= self.s_min:
            raise ValidationError(f"g = {g} violates g <= s_min = {self.s_min}")
        if not g >= 0:
            raise ValidationError(f"g = {g} violates g >= 0")

    def with_bias(self, beta: float, gamma: float) -> "Scenario":
        return Scenario(self.net, self.s, BiasParams(beta, gamma))

    def with_opinions(self, s) -> "Scenario":
        return Scenario(self.net, s, self.bias)


def influence_weights(x, pair: SourcePair, bias: BiasParams):
    """Weights (Hank, Georgia) an individual with opinion ``x`` gives the sources.

    Works elementwise when ``x`` is an array.
    """
    w_bar = bias.beta - bias.gamma * np.abs(x - pair.h)
    w_under = bias.beta - bias.gamma * np.abs(x - pair.g)
    return w_bar, w_under


def resistance(x, row_sum, pair: SourcePair, bias: BiasParams):
    w_bar, w_under = influence_weights(x, pair, bias)
    return 1.0 - row_sum - w_bar - w_under


def _step_vec(x, scn: Scenario, pair: SourcePair, rs):
    w_bar, w_under = influence_weights(x, pair, scn.bias)
    alpha = 1.0 - rs - w_bar - w_under
    return alpha * scn.s + scn.net.W @ x + w_bar * pair.h + w_under * pair.g


def step(state: OpinionState, scn: Scenario, pair: SourcePair) -> OpinionState:
    x = _step_vec(np.asarray(state.x, dtype=float), scn, pair, row_sums(scn.net))
    return OpinionState(x, state.k + 1)


def iterate(scn: Scenario, pair: SourcePair, x0: OpinionState | None = None) -> Iterator[OpinionState]:
    """Yield x(0), x(1), ... forever. No assumption checks."""
    rs = row_sums(scn.net)
    state = x0 if x0 is not None else OpinionState(scn.s.copy(), 0)
    x, k = np.asarray(state.x, dtype=float), state.k
    while True:
        yield OpinionState(x, k)
        x, k = _step_vec(x, scn, pair, rs), k + 1


def _require_assumption(scn: Scenario):
    report = check_assumption1(scn.net, scn.bias)
    if not report.overall_ok:
        raise AssumptionError("; ".join(report.failures()))


def simulate(scn: Scenario, pair: SourcePair, x0: OpinionState | None = None,
             tol: float = 1e-12, max_iter: int = 1_000_000, check: bool = True) -> OpinionState:
    """Iterate the dynamics until the l1 step size drops to ``tol``.

    Starts from the innate opinions unless ``x0`` is given.
    """
    if check:
        _require_assumption(scn)
    scn.validate_pair(pair)
    if x0 is not None:
        x_init = np.asarray(x0.x, dtype=float)
        if x_init.shape != (scn.net.n,) or np.any((x_init < 0) | (x_init > 1)):
            raise ValidationError("initial opinions must be an n-vector in [0, 1]")
    prev = None
    residual = np.inf
    for state in iterate(scn, pair, x0):
        if prev is not None:
            residual = np.abs(state.x - prev.x).sum()
            if residual <= tol:
                return state
        if state.k - (x0.k if x0 else 0) >= max_iter:
            break
        prev = state
    raise IterationLimitError(f"dynamics did not settle within {max_iter} steps", residual)


def steady_state_closed_form(scn: Scenario, pair: SourcePair) -> np.ndarray:
    """Fixed point of the dynamics from one linear solve.

    Inside the box [g, h] the bias kinks resolve to linear branches, so
    the fixed point solves ``E x = rhs`` with ``E = (1 + (g - h) gamma) I - W``.
    """
    beta, gamma = scn.bias.beta, scn.bias.gamma
    g, h = pair.g, pair.h
    n = scn.net.n
    I = np.eye(n)
    E = I - scn.net.W + (g - h) * gamma * I
    diag = 1.0 - row_sums(scn.net) - 2 * beta + (h - g) * gamma
    rhs = diag * scn.s + ((h + g) * beta + (g * g - h * h) * gamma)
    if np.linalg.cond(E) > 1e12:
        raise NumericalError("steady-state system is singular to working precision")
    return np.linalg.solve(E, rhs)
