"""Directed weighted influence networks.

Row ``i`` of the weight matrix holds the influence every other individual
exerts on individual ``i``: ``W[i, j]`` is the weight of ``j`` on ``i``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError

POSITIVE_TOL = 1e-10


@dataclass(frozen=True)
class SocialNetwork:
    W: np.ndarray
    labels: tuple[str, ...] | None = None
    # True when W only records edge presence (entries are 1.0) and still
    # needs a weighting rule such as krackhardt_weights.
    binary: bool = False

    def __post_init__(self):
        W = np.array(self.W, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValidationError(f"weight matrix must be square, got shape {W.shape}")
        if W.shape[0] < 1:
            raise ValidationError("empty network")
        if not np.all(np.isfinite(W)):
            raise ValidationError("weight matrix has non-finite entries")
        if np.any(W < 0):
            i, j = np.argwhere(W < 0)[0]
            raise ValidationError(f"negative weight W[{i}][{j}] = {W[i, j]}")
        if np.any(np.diag(W) != 0):
            i = int(np.flatnonzero(np.diag(W))[0])
            raise ValidationError(f"self-loop on node {i}")
        if self.labels is not None and len(self.labels) != W.shape[0]:
            raise ValidationError("labels length does not match network size")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def norm_inf(self) -> float:
        return float(row_sums(self).max())

    @property
    def norm_1(self) -> float:
        return float(self.W.sum(axis=0).max())

    def in_degrees(self) -> np.ndarray:
        """Number of influencers of each individual (nonzero entries per row)."""
        return np.count_nonzero(self.W, axis=1)


@dataclass(frozen=True)
class AssumptionReport:
    beta_ge_gamma: bool
    norm_gap: float
    norm_condition_ok: bool
    positive_eigvec_ok: bool
    norm_inf: float = field(default=float("nan"))
    norm_1: float = field(default=float("nan"))

    @property
    def overall_ok(self) -> bool:
        return self.beta_ge_gamma and self.norm_condition_ok and self.positive_eigvec_ok

    def failures(self) -> list[str]:
        out = []
        if not self.beta_ge_gamma:
            out.append("beta >= gamma >= 0 violated")
        if not self.norm_condition_ok:
            out.append("1 - max(||W||_inf, ||W||_1) >= max(2 beta, 4 gamma) violated")
        if not self.positive_eigvec_ok:
            out.append("W has no positive dominant eigenvector")
        return out


def _build(n, edges, binary, labels=None):
    W = np.zeros((n, n))
    seen = set()
    for lineno, i, j, w in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"node index out of range for n={n}: {i} {j}", lineno)
        if i == j:
            raise ValidationError(f"self-loop on node {i}" + (f" (line {lineno})" if lineno else ""))
        if (i, j) in seen:
            raise ValidationError(f"duplicate edge {i} {j}" + (f" (line {lineno})" if lineno else ""))
        seen.add((i, j))
        W[i, j] = w
    return SocialNetwork(W, labels=labels, binary=binary)


def load_edge_list(text: str, n: int | None = None) -> SocialNetwork:
    """Parse an edge-list document.

    Each nonblank line that does not start with ``#`` is either ``i j w``
    (``j`` influences ``i`` with weight ``w > 0``) or ``i j`` (presence
    only, weight resolved later by :func:`krackhardt_weights`). Indices
    are 0-based; ``n`` defaults to the largest index plus one.
    """
    edges = []
    kinds = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'i j' or 'i j w', got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"malformed edge {line!r}", lineno) from None
        if i < 0 or j < 0:
            raise ParseError(f"negative node index in {line!r}", lineno)
        if len(parts) == 3 and not (w > 0 and np.isfinite(w)):
            raise ParseError(f"edge weight must be positive, got {parts[2]}", lineno)
        kinds.add(len(parts))
        edges.append((lineno, i, j, w))
    if len(kinds) > 1:
        raise ParseError("document mixes weighted and unweighted edges")
    if n is None:
        if not edges:
            raise ValidationError("empty network")
        n = 1 + max(max(i, j) for _, i, j, _ in edges)
    return _build(n, edges, binary=kinds == {2})


def load_json_network(doc) -> SocialNetwork:
    """Build a network from ``{"n": int, "edges": [[i, j, w], ...]}`` (dict or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        n = int(doc["n"])
        raw_edges = doc.get("edges", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"network document needs integer 'n' and 'edges': {exc}") from None
    if n < 1:
        raise ValidationError("empty network")
    edges = []
    kinds = set()
    for k, e in enumerate(raw_edges):
        if not isinstance(e, (list, tuple)) or len(e) not in (2, 3):
            raise ValidationError(f"edges[{k}]: expected [i, j] or [i, j, w]")
        i, j = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) == 3 else 1.0
        if len(e) == 3 and not w > 0:
            raise ValidationError(f"edges[{k}]: weight must be positive")
        kinds.add(len(e))
        edges.append((None, i, j, w))
    if len(kinds) > 1:
        raise ValidationError("edges mix weighted and unweighted entries")
    labels = doc.get("labels")
    return _build(n, edges, binary=kinds == {2}, labels=tuple(labels) if labels else None)


def krackhardt_weights(unweighted: SocialNetwork) -> SocialNetwork:
    """Weight every present edge into ``i`` by ``1 / (25 + in-degree of i)``."""
    pattern = unweighted.W != 0
    deg = pattern.sum(axis=1)
    W = pattern / (25.0 + deg)[:, None]
    return SocialNetwork(W, labels=unweighted.labels, binary=False)


def row_sums(net: SocialNetwork) -> np.ndarray:
    return net.W.sum(axis=1)


def check_assumption1(net: SocialNetwork, bias) -> AssumptionReport:
    from .spectral import dominant_eigenpair
    from .errors import AssumptionError, IterationLimitError

    beta, gamma = bias.beta, bias.gamma
    n_inf, n_1 = net.norm_inf, net.norm_1
    gap = 1.0 - max(n_inf, n_1)
    try:
        dominant_eigenpair(net)
        positive = True
    except (AssumptionError, IterationLimitError):
        positive = False
    return AssumptionReport(
        beta_ge_gamma=bool(beta >= gamma >= 0),
        norm_gap=gap,
        norm_condition_ok=bool(gap >= max(2 * beta, 4 * gamma)),
        positive_eigvec_ok=positive,
        norm_inf=n_inf,
        norm_1=n_1,
    )


def krackhardt_fixture_text() -> str:
    return resources.files("cbspread").joinpath("data/krackhardt_advice.txt").read_text()


def krackhardt_network(path: str | Path | None = None) -> SocialNetwork:
    """The weighted 21-node Krackhardt advice network (packaged fixture unless ``path`` given)."""
    text = Path(path).read_text() if path is not None else krackhardt_fixture_text()
    return krackhardt_weights(load_edge_list(text, n=21))
