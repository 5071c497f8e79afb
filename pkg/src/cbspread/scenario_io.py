"""Scenario documents (JSON) and their resolution into Scenario objects.

A document looks like::

    {
      "network": {"edge_list": "krackhardt_advice.txt", "krackhardt_weights": true},
      "s": {"default": 0.2, "overrides": {"20": 0.75}},
      "beta": 0.06,
      "gamma": 0.06
    }

``network`` may instead be inline: ``{"n": 2, "edges": [[0, 1, 0.5], ...]}``.
Relative edge-list paths resolve against the document's directory and then
against the packaged data directory.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .dynamics import BiasParams, Scenario
from .errors import CBSpreadError, ValidationError
from .network import krackhardt_weights, load_edge_list, load_json_network


def _field_error(name, msg):
    return ValidationError(f"{name}: {msg}")


def _resolve_path(ref: str, base: Path | None) -> Path:
    p = Path(ref)
    if p.is_absolute():
        return p
    if base is not None and (base / p).exists():
        return base / p
    packaged = Path(str(resources.files("cbspread").joinpath("data"))) / p
    if packaged.exists():
        return packaged
    return (base or Path.cwd()) / p


def _network(doc, base):
    if not isinstance(doc, dict):
        raise _field_error("network", "expected an object")
    try:
        if "edge_list" in doc:
            path = _resolve_path(str(doc["edge_list"]), base)
            try:
                text = path.read_text()
            except OSError as exc:
                raise _field_error("network.edge_list", f"cannot read {path}: {exc.strerror}") from None
            net = load_edge_list(text, n=doc.get("n"))
        else:
            net = load_json_network(doc)
    except CBSpreadError as exc:
        if str(exc).startswith("network"):
            raise
        raise _field_error("network", str(exc)) from None
    if doc.get("krackhardt_weights"):
        net = krackhardt_weights(net)
    elif net.binary:
        raise _field_error("network", "edges carry no weights; set \"krackhardt_weights\": true")
    return net


def _opinions(doc, n):
    if isinstance(doc, list):
        s = np.asarray(doc, dtype=float)
    elif isinstance(doc, dict):
        if "default" not in doc:
            raise _field_error("s", "shorthand needs a 'default' value")
        s = np.full(n, float(doc["default"]))
        for key, val in (doc.get("overrides") or {}).items():
            try:
                idx = int(key)
            except ValueError:
                raise _field_error(f"s.overrides[{key!r}]", "index is not an integer") from None
            if not 0 <= idx < n:
                raise _field_error(f"s.overrides[{key!r}]", f"index out of range for n={n}")
            s[idx] = float(val)
    else:
        raise _field_error("s", "expected a list or {'default': ..., 'overrides': {...}}")
    if s.shape != (n,):
        raise _field_error("s", f"expected {n} values, got {s.size}")
    if np.any((s < 0) | (s > 1)):
        raise _field_error("s", "innate opinions must lie in [0, 1]")
    return s


def scenario_from_dict(doc: dict, base: Path | None = None) -> Scenario:
    for key in ("network", "s", "beta", "gamma"):
        if key not in doc:
            raise _field_error(key, "missing")
    net = _network(doc["network"], base)
    s = _opinions(doc["s"], net.n)
    try:
        beta, gamma = float(doc["beta"]), float(doc["gamma"])
    except (TypeError, ValueError):
        raise _field_error("beta/gamma", "must be numbers") from None
    if gamma < 0:
        raise _field_error("gamma", "must be >= 0")
    return Scenario(net, s, BiasParams(beta, gamma))


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read scenario {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"scenario {path} is not valid JSON: {exc}") from None
    return scenario_from_dict(doc, base=path.parent)
