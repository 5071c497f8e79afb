"""Dominant eigenpair of the influence matrix and centrality-weighted averages."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AssumptionError, IterationLimitError, ValidationError
from .network import POSITIVE_TOL, SocialNetwork


@dataclass(frozen=True)
class SpectralData:
    lam: float
    c: np.ndarray
    c_sum: float
    iterations: int = 0

    @property
    def c_hat(self) -> np.ndarray:
        return self.c / self.c_sum


def dominant_eigenpair(net: SocialNetwork, tol: float = 1e-12, max_iter: int = 100_000,
                       start: np.ndarray | None = None) -> SpectralData:
    """Perron root of W and its left eigenvector, normalized to sum 1.

    Iterates ``c <- (W^T + I) c`` with 1-norm normalization. The unit
    shift keeps the eigenvector but makes the iteration converge on
    periodic graphs too. Stops once ``||W^T c - lam c||_1 <= tol * max(lam, 1)``.
    """
    WT = net.W.T
    n = net.n
    if start is None:
        c = np.full(n, 1.0 / n)
    else:
        c = np.asarray(start, dtype=float)
        if c.shape != (n,) or np.any(c <= 0):
            raise ValidationError("start vector must be positive with one entry per node")
        c = c / c.sum()

    residual = np.inf
    for it in range(1, max_iter + 1):
        Wc = WT @ c
        lam = Wc.sum()
        residual = np.abs(Wc - lam * c).sum()
        if residual <= tol * max(lam, 1.0):
            break
        y = Wc + c
        c = y / y.sum()
    else:
        raise IterationLimitError(f"power iteration did not converge in {max_iter} steps", residual)

    if c.min() <= POSITIVE_TOL:
        raise AssumptionError(
            f"dominant eigenvector is not strictly positive (min component {c.min():.3e})"
        )
    c = c.copy()
    c.setflags(write=False)
    return SpectralData(lam=float(lam), c=c, c_sum=float(c.sum()), iterations=it)


def centrality_average(c_hat, values) -> float:
    c_hat = np.asarray(c_hat, dtype=float)
    values = np.asarray(values, dtype=float)
    if c_hat.shape != values.shape:
        raise ValidationError(f"length mismatch: {c_hat.shape} vs {values.shape}")
    return float(c_hat @ values)
