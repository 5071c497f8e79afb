"""Command-line front end.

Exit codes: 0 success, 2 invalid input or failed assumption, 3 numerical
failure, 4 verification mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cases import CASES, case_checks, lambda_check
from .dynamics import SourcePair, iterate, simulate, steady_state_closed_form
from .errors import AssumptionError, InconsistencyError, NumericalError, ValidationError
from .game import cost, game_scalars, m_fn, nash_equilibrium, q_fn, solve_scenario
from .network import check_assumption1, krackhardt_network
from .oracle import (GridSpec, best_response_iteration, finite_diff_check, grid_saddle,
                     no_profitable_deviation)
from .scenario_io import load_scenario
from .spectral import dominant_eigenpair

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_MISMATCH = 0, 2, 3, 4


def fmt(x) -> str:
    """Six significant digits for human-readable output."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if x is None:
        return "-"
    return f"{float(x):.6g}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=False)


def _emit(args, payload, lines):
    if args.json:
        print(dump_json(payload))
    else:
        for line in lines:
            print(line)


# -- check -------------------------------------------------------------------

def cmd_check(args) -> int:
    scn = load_scenario(args.scenario)
    rep = check_assumption1(scn.net, scn.bias)
    payload = {
        "beta": scn.bias.beta, "gamma": scn.bias.gamma,
        "beta_ge_gamma": rep.beta_ge_gamma,
        "norm_inf": rep.norm_inf, "norm_1": rep.norm_1, "norm_gap": rep.norm_gap,
        "norm_condition_ok": rep.norm_condition_ok,
        "positive_eigvec_ok": rep.positive_eigvec_ok,
        "overall_ok": rep.overall_ok,
        "failures": rep.failures(),
    }
    lines = [
        f"n            {scn.net.n}",
        f"beta, gamma  {fmt(scn.bias.beta)}, {fmt(scn.bias.gamma)}",
        f"||W||_inf    {fmt(rep.norm_inf)}",
        f"||W||_1      {fmt(rep.norm_1)}",
        f"norm gap     {fmt(rep.norm_gap)} (needs >= {fmt(max(2 * scn.bias.beta, 4 * scn.bias.gamma))})",
        f"beta >= gamma >= 0                 {fmt(rep.beta_ge_gamma)}",
        f"norm condition                     {fmt(rep.norm_condition_ok)}",
        f"positive dominant eigenvector      {fmt(rep.positive_eigvec_ok)}",
    ]
    if rep.positive_eigvec_ok:
        spec = dominant_eigenpair(scn.net)
        gs = game_scalars(scn, spec)
        payload.update(lam=gs.lam, s_hat=gs.s_hat, chi=gs.chi, c_sum=gs.c_sum)
        lines += [f"lambda       {fmt(gs.lam)}", f"s_hat        {fmt(gs.s_hat)}",
                  f"chi          {fmt(gs.chi)}"]
    lines.append("overall      " + ("ok" if rep.overall_ok else "FAILED"))
    lines += [f"  {msg}" for msg in rep.failures()]
    _emit(args, payload, lines)
    return EXIT_OK if rep.overall_ok else EXIT_INVALID


# -- equilibrium -------------------------------------------------------------

def _require_ok(scn):
    rep = check_assumption1(scn.net, scn.bias)
    if not rep.overall_ok:
        raise AssumptionError("; ".join(rep.failures()))


def cmd_equilibrium(args) -> int:
    scn = load_scenario(args.scenario)
    _require_ok(scn)
    spec = dominant_eigenpair(scn.net)
    res = solve_scenario(scn, spec)
    payload = {
        "g_star": res.g_star, "h_star": res.h_star, "branch": res.branch.value,
        "f_value": res.f_value, "f_dynamics": res.f_dynamics,
        "cb_moved_georgia": res.cb_moved_georgia, "cb_moved_hank": res.cb_moved_hank,
        "boundary_tie": res.boundary_tie, "clamped": res.clamped,
    }
    lines = [
        f"(g*, h*) = ({fmt(res.g_star)}, {fmt(res.h_star)}), branch {res.branch.value}",
        f"f = {fmt(res.f_value)} (via steady state {fmt(res.f_dynamics)})",
        f"CB moved Georgia: {fmt(res.cb_moved_georgia)}   CB moved Hank: {fmt(res.cb_moved_hank)}",
    ]
    if res.boundary_tie:
        lines.append("note: a branch predicate was within the tie tolerance of zero")
    if res.clamped:
        lines.append(f"note: raw interior root {fmt(res.raw_root)} was clamped to the feasible interval")

    ok = True
    if args.verify:
        grid = GridSpec(args.grid, args.grid)
        g_ax, h_ax = grid.axes(scn.s_min, scn.s_max)
        step = max(g_ax[1] - g_ax[0] if g_ax.size > 1 else 0.0,
                   h_ax[1] - h_ax[0] if h_ax.size > 1 else 0.0)
        try:
            gg, gh, _ = grid_saddle(scn, spec, grid)
            grid_ok = abs(gg - res.g_star) <= step + 1e-12 and abs(gh - res.h_star) <= step + 1e-12
        except InconsistencyError as exc:
            gg = gh = None
            grid_ok = False
            lines.append(f"grid oracle: {exc}")
        bg, bh = best_response_iteration(scn, spec)
        br_ok = max(abs(bg - res.g_star), abs(bh - res.h_star)) <= 1e-4
        dev_ok = no_profitable_deviation(scn, spec, res.g_star, res.h_star)
        fd_err = finite_diff_check(scn, spec, samples=50, seed=args.seed)
        fd_ok = fd_err <= 1e-5
        ok = grid_ok and br_ok and dev_ok and fd_ok
        payload["verify"] = {
            "grid_points": args.grid, "grid_g": gg, "grid_h": gh, "grid_ok": grid_ok,
            "best_response_g": bg, "best_response_h": bh, "best_response_ok": br_ok,
            "no_profitable_deviation": dev_ok,
            "seed": args.seed, "finite_diff_max_rel_err": fd_err, "finite_diff_ok": fd_ok,
            "agree": ok,
        }
        lines += [
            f"grid saddle ({args.grid}x{args.grid}): ({fmt(gg)}, {fmt(gh)})  {'agree' if grid_ok else 'MISMATCH'}",
            f"best response: ({fmt(bg)}, {fmt(bh)})  {'agree' if br_ok else 'MISMATCH'}",
            f"no profitable deviation: {fmt(dev_ok)}",
            f"finite differences (seed {args.seed}): max rel err {fmt(fd_err)}  {'ok' if fd_ok else 'MISMATCH'}",
            "verification: " + ("agree" if ok else "MISMATCH"),
        ]
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


# -- simulate ----------------------------------------------------------------

def _write_trace(path, scn, pair, n_steps):
    n = scn.net.n
    out = sys.stdout if path == "-" else open(path, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["k"] + [f"x_{i}" for i in range(n)])
        for state in iterate(scn, pair):
            w.writerow([state.k] + [repr(float(v)) for v in state.x])
            if state.k >= n_steps:
                break
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_simulate(args) -> int:
    scn = load_scenario(args.scenario)
    pair = SourcePair(args.g, args.h)
    scn.validate_pair(pair)
    final = simulate(scn, pair, tol=args.tol, max_iter=args.max_iter)
    closed = steady_state_closed_form(scn, pair)
    gap = float(np.abs(final.x - closed).max())
    if args.trace:
        _write_trace(args.trace, scn, pair, final.k)
    payload = {"g": args.g, "h": args.h, "iterations": final.k, "x": final.x,
               "closed_form": closed, "max_abs_gap": gap}
    lines = [f"converged in {final.k} iterations (l1 step <= {fmt(args.tol)})",
             "x* = [" + ", ".join(fmt(v) for v in final.x) + "]",
             f"max |x_sim - x_closed| = {fmt(gap)}"]
    if args.trace != "-":  # a trace on stdout stays pure CSV
        _emit(args, payload, lines)
    return EXIT_OK


# -- sweep -------------------------------------------------------------------

def _axis(name, rng, default, points):
    lo, hi = default if rng is None else rng
    if not hi > lo:
        raise ValidationError(f"{name} range [{lo}, {hi}] has zero width")
    return np.linspace(lo, hi, points)


def cmd_sweep(args) -> int:
    scn = load_scenario(args.scenario)
    if args.grid < 2:
        raise ValidationError("--grid must be at least 2")
    if not check_assumption1(scn.net, scn.bias).positive_eigvec_ok:
        raise AssumptionError("W has no positive dominant eigenvector")
    spec = dominant_eigenpair(scn.net)
    gs = game_scalars(scn, spec)

    if args.axes == "gh":
        if args.mode != "f":
            raise ValidationError(f"mode {args.mode} does not vary with (g, h); use --axes bg")
        _require_ok(scn)
        a = _axis("g", args.g_range, (0.0, scn.s_min), args.grid)
        b = _axis("h", args.h_range, (scn.s_max, 1.0), args.grid)
        if a[0] < 0 or a[-1] > scn.s_min or b[0] < scn.s_max or b[-1] > 1:
            raise ValidationError("g range must lie in [0, s_min] and h range in [s_max, 1]")
        A, B = np.meshgrid(a, b, indexing="ij")
        V = cost(gs, scn.bias, A, B)
        header = ["g", "h", "f"]
    else:
        a = _axis("beta", args.beta_range, (0.0, (1 - max(scn.net.norm_inf, scn.net.norm_1)) / 2), args.grid)
        b = _axis("gamma", args.gamma_range, (0.0, (1 - max(scn.net.norm_inf, scn.net.norm_1)) / 4), args.grid)
        A, B = np.meshgrid(a, b, indexing="ij")
        V = np.full(A.shape, np.nan)
        for idx in np.ndindex(A.shape):
            bias = scn.with_bias(float(A[idx]), float(B[idx])).bias
            if args.mode == "m01":
                V[idx] = m_fn(gs, bias, 0.0, 1.0)
            elif args.mode == "q01":
                V[idx] = q_fn(gs, bias, 0.0, 1.0)
            else:
                try:
                    V[idx] = nash_equilibrium(gs, bias).f_value
                except AssumptionError:
                    pass
        header = ["beta", "gamma", args.mode]

    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(header)
        for idx in np.ndindex(A.shape):
            v = V[idx]
            w.writerow([repr(float(A[idx])), repr(float(B[idx])), repr(float(v)) if np.isfinite(v) else "nan"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# -- reproduce ---------------------------------------------------------------

def cmd_reproduce(args) -> int:
    if args.fixture is not None and not Path(args.fixture).exists():
        raise ValidationError(f"fixture {args.fixture} not found")
    net = krackhardt_network(args.fixture)
    spec = dominant_eigenpair(net)
    lam = lambda_check(spec.lam)
    all_ok = lam.ok
    cases = {}
    lines = [f"lambda = {fmt(lam.value)} (expected {fmt(lam.expected)} +/- {fmt(lam.tol)})  "
             + ("pass" if lam.ok else "FAIL")]
    for name, case in CASES.items():
        try:
            res, gs, checks, branch_ok = case_checks(case, net, spec)
        except (AssumptionError, NumericalError) as exc:
            all_ok = False
            cases[name] = {"error": str(exc), "pass": False}
            lines.append(f"case {name}: ERROR {exc}")
            continue
        ok = branch_ok and all(c.ok for c in checks)
        all_ok &= ok
        cases[name] = {
            "branch": res.branch.value, "expected_branch": case.branch, "branch_ok": branch_ok,
            "s_hat": gs.s_hat, "chi": gs.chi, "g_star": res.g_star, "h_star": res.h_star,
            "checks": [{"label": c.label, "value": c.value, "expected": c.expected,
                        "tol": c.tol, "pass": c.ok} for c in checks],
            "pass": ok,
        }
        lines.append(f"case {name}: s_hat {fmt(gs.s_hat)}  chi {fmt(gs.chi)}  "
                     f"branch {res.branch.value}  (g*, h*) = ({fmt(res.g_star)}, {fmt(res.h_star)})  "
                     + ("pass" if ok else "FAIL"))
        if not branch_ok:
            lines.append(f"    branch: expected {case.branch}")
        for c in checks:
            if not c.ok:
                lines.append(f"    {c.label}: {fmt(c.value)} vs expected {fmt(c.expected)} +/- {c.tol:g}")
    n_pass = sum(1 for c in cases.values() if c["pass"])
    lines.append(f"{n_pass}/{len(CASES)} cases pass" + ("" if lam.ok else "; lambda mismatch"))
    payload = {"lambda": {"value": lam.value, "expected": lam.expected, "tol": lam.tol, "pass": lam.ok},
               "cases": cases, "pass": all_ok}
    _emit(args, payload, lines)
    return EXIT_OK if all_ok else EXIT_MISMATCH


# -- parser ------------------------------------------------------------------

def _range(text):
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cbspread", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--scenario", required=True, metavar="PATH", help="scenario JSON document")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    scenario_cmd("check", "report the standing assumptions and spectral scalars").set_defaults(func=cmd_check)

    sp = scenario_cmd("equilibrium", "compute the pure Nash equilibrium")
    sp.add_argument("--verify", action="store_true", help="cross-check with the brute-force oracles")
    sp.add_argument("--grid", type=int, default=400, metavar="N", help="grid points per axis for --verify")
    sp.add_argument("--seed", type=int, default=0, help="seed for the finite-difference samples")
    sp.set_defaults(func=cmd_equilibrium)

    sp = scenario_cmd("simulate", "iterate the opinion dynamics to convergence")
    sp.add_argument("--g", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--max-iter", type=int, default=1_000_000)
    sp.add_argument("--trace", metavar="PATH", help="write the trajectory as CSV ('-' for stdout)")
    sp.set_defaults(func=cmd_simulate)

    sp = scenario_cmd("sweep", "tabulate the cost or a predicate over a 2-D parameter grid")
    sp.add_argument("--axes", choices=["gh", "bg"], default="gh",
                    help="gh: sources (g, h); bg: bias parameters (beta, gamma)")
    sp.add_argument("--mode", choices=["f", "m01", "q01"], default="f")
    sp.add_argument("--grid", type=int, default=101, metavar="N")
    sp.add_argument("--g-range", type=_range, metavar="LO:HI")
    sp.add_argument("--h-range", type=_range, metavar="LO:HI")
    sp.add_argument("--beta-range", type=_range, metavar="LO:HI")
    sp.add_argument("--gamma-range", type=_range, metavar="LO:HI")
    sp.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("reproduce", help="rerun the five Krackhardt cases against published values")
    sp.add_argument("--fixture", metavar="PATH", help="alternative edge-list fixture")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, AssumptionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InconsistencyError as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
