"""The five Krackhardt advice-network scenarios and their published results."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import BiasParams, Scenario
from .network import SocialNetwork, krackhardt_network

PUBLISHED_LAMBDA = 0.2369
TOL = 5e-4


@dataclass(frozen=True)
class CaseSpec:
    name: str
    high: tuple[int, ...]   # 0-based individuals holding the 0.75 innate opinion; the rest hold 0.2
    beta: float
    gamma: float
    branch: str
    expected_g: float
    expected_h: float
    s_hat: float | None = None
    chi: float | None = None
    root: float | None = None  # r(0) or w(1) where the equilibrium is interior

    def opinions(self, n: int = 21) -> np.ndarray:
        s = np.full(n, 0.2)
        s[list(self.high)] = 0.75
        return s

    def scenario(self, net: SocialNetwork | None = None) -> Scenario:
        net = krackhardt_network() if net is None else net
        return Scenario(net, self.opinions(net.n), BiasParams(self.beta, self.gamma))


_ALL_BUT_FIRST_TWO = tuple(range(2, 21))

CASES = {
    "A": CaseSpec("A", _ALL_BUT_FIRST_TWO, 0.06, 0.0, "NoCB", 0.0, 1.0),
    # published s_hat = 0.2283 only fits individual 21 at 0.75 and the rest at 0.2
    "B": CaseSpec("B", (20,), 0.06, 0.06, "M01NonNeg_QatSbarNonPos", 0.0, 0.75,
                  s_hat=0.2283, chi=0.0580),
    "C": CaseSpec("C", (17, 18, 19, 20), 0.06, 0.06, "M01NonNeg_Interior_r0", 0.0, 0.8586,
                  s_hat=0.3637, chi=0.0945, root=0.8586),
    "D": CaseSpec("D", _ALL_BUT_FIRST_TWO, 0.06, 0.06, "MsLow1NonPos", 0.2, 1.0,
                  s_hat=0.7265, chi=0.1693),
    "E": CaseSpec("E", _ALL_BUT_FIRST_TWO, 0.06, 0.048, "Interior_w1", 0.0993, 1.0, root=0.0993),
}


EXACT = 1e-12


@dataclass(frozen=True)
class Check:
    label: str
    value: float
    expected: float
    tol: float

    @property
    def ok(self) -> bool:
        return abs(self.value - self.expected) <= self.tol


def lambda_check(lam: float) -> Check:
    return Check("lambda", lam, PUBLISHED_LAMBDA, TOL)


def case_checks(case: CaseSpec, net: SocialNetwork, spec=None):
    """Solve one case and compare it against the published numbers.

    Returns ``(result, scalars, checks, branch_ok)``.
    """
    from .game import game_scalars, r_fn, solve_scenario, w_fn
    from .spectral import dominant_eigenpair

    scn = case.scenario(net)
    spec = dominant_eigenpair(net) if spec is None else spec
    gs = game_scalars(scn, spec)
    res = solve_scenario(scn, spec)
    checks = []
    if case.s_hat is not None:
        checks.append(Check("s_hat", gs.s_hat, case.s_hat, TOL))
    if case.chi is not None:
        checks.append(Check("chi", gs.chi, case.chi, TOL))
    if case.root is not None:
        root = r_fn(gs, scn.bias, 0.0) if case.expected_h < 1 else w_fn(gs, scn.bias, 1.0)
        checks.append(Check("r(0)" if case.expected_h < 1 else "w(1)", root, case.root, TOL))
    interior_g = case.branch == "Interior_w1"
    interior_h = case.branch == "M01NonNeg_Interior_r0"
    checks.append(Check("g*", res.g_star, case.expected_g, TOL if interior_g else EXACT))
    checks.append(Check("h*", res.h_star, case.expected_h, TOL if interior_h else EXACT))
    return res, gs, checks, res.branch.value == case.branch
