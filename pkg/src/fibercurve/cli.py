"""Command-line front end.

Subcommands
-----------
solve       one critical point at a prescribed (c, branch, k)
trace       level curves over a c grid for the configured branches and k's
thresholds  the two threshold constants and the zero-crossing minimizers
verify      full verification battery; nonzero exit when a verdict fails
report      thresholds + curves + verdicts in one artifact bundle (no gating)

All subcommands read a JSON config (--config), write artifacts into --out
(report.json, config.echo.json, and where applicable curves.csv and
diagram.svg), and are deterministic for a fixed config and seed: rerunning
produces byte-identical artifacts except for the "timing_seconds" subtree of
report.json.

Exit codes: 0 success, 1 bad config, 2 non-convergence or infeasibility,
3 verification verdict failure.

Config sketch (defaults shown in config.echo.json after any run)::

    {
      "problem": {
        "kind": "dirichlet",            // or "truncated_rn"
        "dimension": 1,
        "n_interior": 31,               // 2d: [nx, ny]; truncated: n_nodes
        "bounds": [0.0, 1.0],           // truncated: "radius" instead
        "p": 2.0, "alpha": 1.5, "beta": 4.0, "eps_reg": 0.0,
        "weights": {"a": "sin(2*pi*x) + 0.3", "b": "cos(2*pi*x) + 0.2"}
                                        // or {"a_csv": "...", "b_csv": "..."}
      },
      "cone": "A_POS",
      "branches": ["plus", "minus"],
      "ks": [1],
      "c_grid": {"from": -0.5, "to": -0.001, "n": 9,
                 "spacing": "geometric"},   // or {"values": [...]}
      "c": -0.01, "branch": "plus", "k": 1,   // solve only
      "multistart": 32, "warm_multistart": 8, "n_samples": 64,
      "seed": 0, "start_support": "cone",
      "limit_schedule": [-0.01, -0.001, -0.0001],
      "threshold_deltas": [0.01, 0.05],
      "tolerances": {"residual_grad": 1e-6, "energy_defect_rel": 1e-8, ...}
    }
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .curve_tracer import (
    extend_minus_past_cstarstar,
    geometric_grid,
    limit_check_zero,
    ordering_check,
    trace_family,
)
from .functional_core import ConeTag
from .model_problems import (
    Grid,
    PLaplacianProblem,
    build_disjoint_basis,
    build_triple,
    cone_node_mask,
    weights_from_csv,
    weights_from_expressions,
)
from .nehari_minmax import (
    InfeasibleLevelError,
    InfeasibleRayError,
    OptimizerParams,
    SphereConstraint,
    compute_c_star,
    compute_c_star_star,
)
from .reporting import build_report, write_curves_csv, write_diagram_svg, write_report_json

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOCONV = 2
EXIT_VERIFY = 3


class ConfigError(Exception):
    pass


DEFAULT_TOLERANCES = {
    "residual_grad": 1e-6,
    "energy_defect_rel": 1e-8,
    "cone_margin": 1e-12,
    "gtol": 1e-8,
    "max_iter": 5000,
    "curve_noise": 1e-6,
    "limit_ratio": 0.05,
    "zero_level_abs": 1e-4,
    "lipschitz_safety": 3.0,
}

_TOP_DEFAULTS = {
    "problem": None,
    "cone": "A_POS",
    "branches": ["plus", "minus"],
    "ks": [1],
    "c_grid": None,
    "c": None,
    "branch": "plus",
    "k": 1,
    "multistart": 32,
    "warm_multistart": 8,
    "n_samples": 64,
    "seed": 0,
    "start_support": "cone",
    "limit_schedule": [-1e-2, -1e-3, -1e-4],
    "threshold_deltas": [0.01, 0.05],
    "tolerances": None,
}

_PROBLEM_DEFAULTS = {
    "kind": "dirichlet",
    "dimension": 1,
    "n_interior": None,
    "n_nodes": None,
    "bounds": None,
    "radius": None,
    "p": 2.0,
    "alpha": 1.5,
    "beta": 4.0,
    "eps_reg": 0.0,
    "weights": None,
}


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _merge_section(user: dict, defaults: dict, name: str) -> dict:
    unknown = set(user) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown {name} key(s): {', '.join(sorted(unknown))}")
    merged = dict(defaults)
    merged.update(user)
    return merged


def merge_config(user: dict) -> dict:
    """Defaults + user config, rejecting unknown keys; the echoed form."""
    cfg = _merge_section(user, _TOP_DEFAULTS, "config")
    if cfg["problem"] is None:
        raise ConfigError("config needs a \"problem\" section")
    if not isinstance(cfg["problem"], dict):
        raise ConfigError("\"problem\" must be an object")
    cfg["problem"] = _merge_section(cfg["problem"], _PROBLEM_DEFAULTS, "problem")
    tol = cfg["tolerances"] if cfg["tolerances"] is not None else {}
    if not isinstance(tol, dict):
        raise ConfigError("\"tolerances\" must be an object")
    cfg["tolerances"] = _merge_section(tol, DEFAULT_TOLERANCES, "tolerances")
    return cfg


def _build_problem(pcfg: dict) -> PLaplacianProblem:
    kind = pcfg["kind"]
    dim = pcfg["dimension"]
    if kind not in ("dirichlet", "truncated_rn"):
        raise ConfigError(f"problem.kind must be dirichlet or truncated_rn, got {kind!r}")
    if dim not in (1, 2):
        raise ConfigError(f"problem.dimension must be 1 or 2, got {dim!r}")

    if kind == "dirichlet":
        n_int = pcfg["n_interior"]
        if n_int is None:
            raise ConfigError("dirichlet problems need problem.n_interior")
        bounds = pcfg["bounds"]
        if dim == 1:
            bounds = (0.0, 1.0) if bounds is None else tuple(bounds)
            grid = Grid(1, (bounds,), (int(n_int) + 2,), dirichlet=True)
        else:
            if not isinstance(n_int, (list, tuple)) or len(n_int) != 2:
                raise ConfigError("2d problems need problem.n_interior = [nx, ny]")
            if bounds is None:
                bounds = ((0.0, 1.0), (0.0, 1.0))
            else:
                bounds = tuple(tuple(b) for b in bounds)
            grid = Grid(2, bounds, tuple(int(n) + 2 for n in n_int), dirichlet=True)
    else:
        n_nodes = pcfg["n_nodes"]
        radius = pcfg["radius"]
        if n_nodes is None or radius is None:
            raise ConfigError("truncated problems need problem.n_nodes and problem.radius")
        r = float(radius)
        if dim == 1:
            grid = Grid(1, ((-r, r),), (int(n_nodes),), dirichlet=False)
        else:
            if not isinstance(n_nodes, (list, tuple)) or len(n_nodes) != 2:
                raise ConfigError("2d truncated problems need problem.n_nodes = [nx, ny]")
            grid = Grid(2, ((-r, r), (-r, r)), tuple(int(n) for n in n_nodes), dirichlet=False)

    wcfg = pcfg["weights"]
    if not isinstance(wcfg, dict):
        raise ConfigError("problem.weights must be an object")
    has_expr = "a" in wcfg and "b" in wcfg
    has_csv = "a_csv" in wcfg and "b_csv" in wcfg
    if has_expr == has_csv:
        raise ConfigError(
            "problem.weights needs either expressions {a, b} or files {a_csv, b_csv}"
        )
    if has_expr:
        weights = weights_from_expressions(grid, str(wcfg["a"]), str(wcfg["b"]))
    else:
        weights = weights_from_csv(grid, str(wcfg["a_csv"]), str(wcfg["b_csv"]))
    return PLaplacianProblem(
        grid, weights, float(pcfg["p"]), float(pcfg["alpha"]), float(pcfg["beta"]),
        float(pcfg["eps_reg"]), kind,
    )


class Setup:
    """Problem, triple, and constraint factory shared by the subcommands."""

    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.problem = _build_problem(cfg["problem"])
        self.triple = build_triple(self.problem)
        try:
            self.tag = ConeTag[cfg["cone"]]
        except KeyError:
            raise ConfigError(
                f"unknown cone {cfg['cone']!r}; choose from "
                f"{', '.join(t.name for t in ConeTag)}"
            ) from None
        if self.tag.needs_b_pos:
            self.tag_both = self.tag
        else:
            self.tag_both = (
                ConeTag.A_POS_B_POS if self.tag.a_sign > 0 else ConeTag.A_NEG_B_POS
            )
        tol = cfg["tolerances"]
        self.params = OptimizerParams(gtol=tol["gtol"], max_iter=int(tol["max_iter"]))
        self.use_support = cfg["start_support"] == "cone"
        if cfg["start_support"] not in ("cone", "none"):
            raise ConfigError("start_support must be \"cone\" or \"none\"")
        self._cache: dict[ConeTag, SphereConstraint] = {}

    def constraint(self, tag: ConeTag) -> SphereConstraint:
        if tag not in self._cache:
            support = None
            if self.use_support:
                mask = cone_node_mask(self.problem, tag)
                if not mask.any():
                    raise ConfigError(
                        f"cone {tag.name} has empty node support on this grid; "
                        "refine the grid or pass start_support = \"none\""
                    )
                support = mask
            self._cache[tag] = SphereConstraint(
                triple=self.triple,
                tag=tag,
                eps_cone=self.cfg["tolerances"]["cone_margin"],
                start_support=support,
            )
        return self._cache[tag]

    def constraint_for_branch(self, branch: str) -> SphereConstraint:
        # minus-branch levels only exist where the convex term is positive
        return self.constraint(self.tag_both if branch == "minus" else self.tag)

    def basis(self, k_max: int):
        return build_disjoint_basis(self.problem, self.tag_both, k_max)


def _c_values(cfg: dict) -> list[float]:
    gcfg = cfg["c_grid"]
    if gcfg is None:
        raise ConfigError("this command needs a c_grid section")
    if not isinstance(gcfg, dict):
        raise ConfigError("c_grid must be an object")
    if "values" in gcfg:
        values = [float(v) for v in gcfg["values"]]
    else:
        for key in ("from", "to", "n"):
            if key not in gcfg:
                raise ConfigError("c_grid needs either values or from/to/n")
        spacing = gcfg.get("spacing", "geometric")
        if spacing == "geometric":
            values = list(geometric_grid(float(gcfg["from"]), float(gcfg["to"]), int(gcfg["n"])))
        elif spacing == "linear":
            values = list(np.linspace(float(gcfg["from"]), float(gcfg["to"]), int(gcfg["n"])))
        else:
            raise ConfigError(f"c_grid.spacing must be geometric or linear, got {spacing!r}")
    values = sorted(float(v) for v in values)
    if len(values) < 1:
        raise ConfigError("c_grid is empty")
    if any(v1 <= v0 for v0, v1 in zip(values, values[1:])):
        raise ConfigError("c_grid values must be distinct")
    return values


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


def _write_echo(out_dir: str, cfg: dict) -> None:
    with open(os.path.join(out_dir, "config.echo.json"), "w", encoding="utf-8") as fh:
        json.dump(cfg, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _trace_all(setup: Setup, c_values, quiet: bool):
    """Trace every configured (branch, k); returns (curves, ground_converged)."""
    cfg = setup.cfg
    ks = sorted(set(int(k) for k in cfg["ks"]))
    basis = setup.basis(max(ks)) if max(ks) > 1 else None
    curves = []
    all_ok = True
    for branch in cfg["branches"]:
        if branch not in ("plus", "minus"):
            raise ConfigError(f"unknown branch {branch!r}")
        fam = trace_family(
            setup.constraint_for_branch(branch),
            c_values,
            branch,
            ks=ks,
            basis=basis,
            multistart=int(cfg["multistart"]),
            warm_multistart=int(cfg["warm_multistart"]),
            seed=int(cfg["seed"]),
            params=setup.params,
            noise=cfg["tolerances"]["curve_noise"],
            lipschitz_safety=cfg["tolerances"]["lipschitz_safety"],
            n_samples=int(cfg["n_samples"]),
        )
        for k in ks:
            curve = fam[k]
            curves.append(curve)
            bad = [p for p in curve.points if k == 1 and not p.record.converged]
            if bad:
                all_ok = False
            _say(
                quiet,
                f"curve {branch} k={k}: {len(curve.points)} points"
                + (f", truncated ({curve.truncation_reason})" if curve.truncation_reason else ""),
            )
    return curves, all_ok


def _certify_points(curves, tol) -> tuple[bool, int]:
    """Residual and defect certification over converged exact points."""
    ok = True
    n_checked = 0
    for curve in curves:
        for p in curve.points:
            if "surrogate" in p.flags or not p.record.converged:
                continue
            n_checked += 1
            if p.record.residual_grad > tol["residual_grad"]:
                ok = False
            if p.record.energy_defect > tol["energy_defect_rel"] * (1.0 + abs(p.c)):
                ok = False
    return ok, n_checked


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(setup: Setup, out_dir: str, quiet: bool) -> int:
    cfg = setup.cfg
    if cfg["c"] is None:
        raise ConfigError("solve needs a top-level \"c\" value")
    c = float(cfg["c"])
    branch = cfg["branch"]
    k = int(cfg["k"])
    if branch not in ("plus", "minus"):
        raise ConfigError(f"unknown branch {branch!r}")
    t0 = time.perf_counter()
    curves, _ = _trace_one_point(setup, c, branch, k)
    elapsed = time.perf_counter() - t0
    point = curves[0].points[0]
    tol = cfg["tolerances"]
    certified = (
        point.record.converged
        and point.record.residual_grad <= tol["residual_grad"]
        and point.record.energy_defect <= tol["energy_defect_rel"] * (1.0 + abs(c))
    )
    report = build_report(
        cfg,
        curves=curves,
        verdicts={"certified": certified},
        extras={
            "solution": {
                "branch": branch,
                "k": k,
                "c": c,
                "lambda": point.lam,
                "t_root": point.record.t_root,
                "u_norm": point.record.u_norm,
                "residual_grad": point.record.residual_grad,
                "energy_defect": point.record.energy_defect,
                "converged": point.record.converged,
                "coefficients": point.record.coefficients,
            }
        },
        timing_seconds={"total": elapsed},
    )
    write_report_json(os.path.join(out_dir, "report.json"), report)
    write_curves_csv(os.path.join(out_dir, "curves.csv"), curves)
    _say(quiet, f"lambda = {point.lam!r} at c={c!r} ({branch}, k={k})")
    _say(quiet, f"residual_grad = {point.record.residual_grad:.3e}, "
                f"energy_defect = {point.record.energy_defect:.3e}")
    if k == 1 and not certified:
        _say(quiet, "solve did not certify: residual or defect above tolerance")
        return EXIT_NOCONV
    return EXIT_OK


def _trace_one_point(setup: Setup, c: float, branch: str, k: int):
    cfg = setup.cfg
    basis = setup.basis(k) if k > 1 else None
    fam = trace_family(
        setup.constraint_for_branch(branch), [c], branch, ks=(k,), basis=basis,
        multistart=int(cfg["multistart"]), warm_multistart=int(cfg["warm_multistart"]),
        seed=int(cfg["seed"]), params=setup.params,
        noise=cfg["tolerances"]["curve_noise"],
        lipschitz_safety=cfg["tolerances"]["lipschitz_safety"],
        n_samples=int(cfg["n_samples"]),
    )
    curve = fam[k]
    if not curve.points:
        raise InfeasibleLevelError(
            f"no {branch}-branch level at c={c!r}: {curve.truncation_reason}"
        )
    return [curve], curve


def cmd_trace(setup: Setup, out_dir: str, quiet: bool) -> int:
    cfg = setup.cfg
    c_values = _c_values(cfg)
    t0 = time.perf_counter()
    curves, ground_ok = _trace_all(setup, c_values, quiet)
    elapsed = time.perf_counter() - t0
    report = build_report(cfg, curves=curves, timing_seconds={"total": elapsed})
    write_report_json(os.path.join(out_dir, "report.json"), report)
    write_curves_csv(os.path.join(out_dir, "curves.csv"), curves)
    write_diagram_svg(os.path.join(out_dir, "diagram.svg"), curves)
    if not any(curve.points for curve in curves):
        _say(quiet, "no curve produced any point")
        return EXIT_NOCONV
    return EXIT_OK if ground_ok else EXIT_NOCONV


def cmd_thresholds(setup: Setup, out_dir: str, quiet: bool) -> int:
    cfg = setup.cfg
    constraint = setup.constraint(setup.tag_both)
    t0 = time.perf_counter()
    c_star = compute_c_star(
        constraint, multistart=int(cfg["multistart"]), seed=int(cfg["seed"]),
        params=setup.params,
    )
    c2, minimizers = compute_c_star_star(
        constraint, multistart=int(cfg["multistart"]), seed=int(cfg["seed"]),
        params=setup.params,
    )
    elapsed = time.perf_counter() - t0
    thresholds = {
        "c_star": c_star,
        "c_star_star": c2,
        "n_zero_level_minimizers": len(minimizers),
        "ordered": bool(c_star < 0.0 < c2),
    }
    report = build_report(cfg, thresholds=thresholds, timing_seconds={"total": elapsed})
    write_report_json(os.path.join(out_dir, "report.json"), report)
    _say(quiet, f"c_star = {c_star!r}")
    _say(quiet, f"c_star_star = {c2!r} ({len(minimizers)} minimizer(s))")
    return EXIT_OK


def _derived_grids(setup: Setup, c_star: float, c2: float):
    """Default verification grids spanning (c_star, 0) and through c_star_star."""
    common = list(np.linspace(0.5 * c_star, 0.05 * c_star, 5))
    minus_extra = list(np.linspace(0.3 * c2, 0.9 * c2, 3))
    return common, sorted(common + minus_extra)


def _run_battery(setup: Setup, quiet: bool):
    """Shared by verify and report: thresholds, curves, and all verdicts."""
    cfg = setup.cfg
    tol = cfg["tolerances"]
    timing: dict[str, float] = {}

    t0 = time.perf_counter()
    constraint_both = setup.constraint(setup.tag_both)
    c_star = compute_c_star(
        constraint_both, multistart=int(cfg["multistart"]), seed=int(cfg["seed"]),
        params=setup.params,
    )
    c2, minimizers = compute_c_star_star(
        constraint_both, multistart=int(cfg["multistart"]), seed=int(cfg["seed"]),
        params=setup.params,
    )
    timing["thresholds"] = time.perf_counter() - t0
    _say(quiet, f"c_star = {c_star!r}, c_star_star = {c2!r}")

    if cfg["c_grid"] is not None:
        plus_grid = _c_values(cfg)
        minus_grid = plus_grid
    else:
        plus_grid, minus_grid = _derived_grids(setup, c_star, c2)

    ks = sorted(set(int(k) for k in cfg["ks"]))
    basis = setup.basis(max(ks)) if max(ks) > 1 else None
    t0 = time.perf_counter()
    curves = []
    fams = {}
    ground_ok = True
    for branch in cfg["branches"]:
        if branch not in ("plus", "minus"):
            raise ConfigError(f"unknown branch {branch!r}")
        grid = plus_grid if branch == "plus" else minus_grid
        grid = [c for c in grid if c > c_star]
        fam = trace_family(
            setup.constraint_for_branch(branch), grid, branch, ks=ks, basis=basis,
            multistart=int(cfg["multistart"]),
            warm_multistart=int(cfg["warm_multistart"]), seed=int(cfg["seed"]),
            params=setup.params, noise=tol["curve_noise"],
            lipschitz_safety=tol["lipschitz_safety"], n_samples=int(cfg["n_samples"]),
        )
        fams[branch] = fam
        for k in ks:
            curves.append(fam[k])
            if k == 1 and any(not p.record.converged for p in fam[k].points):
                ground_ok = False
    timing["curves"] = time.perf_counter() - t0

    verdicts: dict[str, object] = {
        "thresholds_ordered": bool(c_star < 0.0 < c2),
    }
    verdicts["curve_monotone"] = all(c.verdicts["monotone_decreasing"] for c in curves)
    verdicts["curve_lipschitz"] = all(c.verdicts["lipschitz_ok"] for c in curves)
    verdicts["norm_monotone"] = all(c.verdicts["norm_monotone"] for c in curves)
    verdicts["k_monotone"] = all(c.verdicts.get("k_monotone", True) for c in curves)

    if "plus" in fams and "minus" in fams:
        ordering = ordering_check(fams["plus"][1], fams["minus"][1], noise=tol["curve_noise"])
        verdicts["pdm_ordering"] = ordering["ok"]
        verdicts["pdm_worst_gap"] = ordering["worst_gap"]
    certified, n_checked = _certify_points(curves, tol)
    verdicts["residuals_certified"] = certified
    verdicts["n_points_certified"] = n_checked

    extras: dict[str, object] = {}
    if "plus" in cfg["branches"]:
        t0 = time.perf_counter()
        limit = limit_check_zero(
            setup.constraint_for_branch("plus"),
            schedule=[float(v) for v in cfg["limit_schedule"]],
            tol_limit=tol["limit_ratio"],
            seed=int(cfg["seed"]),
            multistart=int(cfg["multistart"]),
            params=setup.params,
            c_star_value=c_star,
        )
        timing["zero_limit"] = time.perf_counter() - t0
        extras["zero_limit"] = limit
        verdicts["limit_magnitude_decreasing"] = limit["magnitude_decreasing"]
        verdicts["limit_ratio_ok"] = limit["limit_ok"]
        verdicts["limit_scaling_bound"] = limit["bound_ok"]
        verdicts["limit_scaling_trend"] = limit["trend_ok"]

    if "minus" in cfg["branches"]:
        t0 = time.perf_counter()
        try:
            crossing = extend_minus_past_cstarstar(
                setup.constraint_for_branch("minus"),
                deltas=[float(d) for d in cfg["threshold_deltas"]],
                multistart=int(cfg["multistart"]),
                seed=int(cfg["seed"]),
                params=setup.params,
                zero_tol=tol["zero_level_abs"],
                noise=tol["curve_noise"],
            )
            extras["zero_crossing"] = {
                key: crossing[key]
                for key in (
                    "c_star_star", "minimizer_a_margins", "positive_before",
                    "zero_at_threshold", "negative_after", "ok",
                )
            }
            verdicts["zero_crossing"] = crossing["ok"]
        except ValueError as exc:
            # the continuation hypothesis failed on this instance; report, don't crash
            extras["zero_crossing"] = {"hypothesis_error": str(exc)}
            verdicts["zero_crossing"] = False
        timing["zero_crossing"] = time.perf_counter() - t0

    thresholds = {
        "c_star": c_star,
        "c_star_star": c2,
        "n_zero_level_minimizers": len(minimizers),
    }
    return curves, thresholds, verdicts, extras, timing, ground_ok


_GATING_VERDICTS = (
    "thresholds_ordered",
    "curve_monotone",
    "curve_lipschitz",
    "norm_monotone",
    "k_monotone",
    "pdm_ordering",
    "residuals_certified",
    "limit_magnitude_decreasing",
    "limit_ratio_ok",
    "limit_scaling_bound",
    "limit_scaling_trend",
    "zero_crossing",
)


def _print_verdicts(verdicts: dict, quiet: bool) -> bool:
    all_ok = True
    for name in _GATING_VERDICTS:
        if name not in verdicts:
            continue
        ok = bool(verdicts[name])
        _say(quiet, f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            all_ok = False
    return all_ok


def cmd_verify(setup: Setup, out_dir: str, quiet: bool) -> int:
    curves, thresholds, verdicts, extras, timing, ground_ok = _run_battery(setup, quiet)
    all_ok = _print_verdicts(verdicts, quiet)
    verdicts["all_ok"] = all_ok
    report = build_report(
        setup.cfg, curves=curves, thresholds=thresholds, verdicts=verdicts,
        extras=extras, timing_seconds=timing,
    )
    write_report_json(os.path.join(out_dir, "report.json"), report)
    write_curves_csv(os.path.join(out_dir, "curves.csv"), curves)
    write_diagram_svg(
        os.path.join(out_dir, "diagram.svg"), curves,
        c_star=thresholds["c_star"], c_star_star=thresholds["c_star_star"],
    )
    if not ground_ok:
        _say(quiet, "verification aborted: ground levels did not converge")
        return EXIT_NOCONV
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_report(setup: Setup, out_dir: str, quiet: bool) -> int:
    curves, thresholds, verdicts, extras, timing, ground_ok = _run_battery(setup, quiet)
    verdicts["all_ok"] = _print_verdicts(verdicts, quiet)
    report = build_report(
        setup.cfg, curves=curves, thresholds=thresholds, verdicts=verdicts,
        extras=extras, timing_seconds=timing,
    )
    write_report_json(os.path.join(out_dir, "report.json"), report)
    write_curves_csv(os.path.join(out_dir, "curves.csv"), curves)
    write_diagram_svg(
        os.path.join(out_dir, "diagram.svg"), curves,
        c_star=thresholds["c_star"], c_star_star=thresholds["c_star_star"],
    )
    return EXIT_OK if ground_ok else EXIT_NOCONV


_COMMANDS = {
    "solve": cmd_solve,
    "trace": cmd_trace,
    "thresholds": cmd_thresholds,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fibercurve",
        description="level curves of concave-convex variational problems "
        "with a prescribed energy value",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON config path")
    common.add_argument("--out", default=".", help="output directory (default .)")
    common.add_argument("--seed", type=int, default=None, help="override config seed")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "one critical point at a prescribed value"),
        ("trace", "level curves over a grid of prescribed values"),
        ("thresholds", "the two threshold constants"),
        ("verify", "verification battery (exit 3 on failed verdicts)"),
        ("report", "full artifact bundle without verdict gating"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    args = parser.parse_args(argv)

    try:
        cfg = merge_config(_load_config(args.config))
        if args.seed is not None:
            cfg["seed"] = int(args.seed)
        os.makedirs(args.out, exist_ok=True)
        setup = Setup(cfg)
        _write_echo(args.out, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        code = _COMMANDS[args.command](setup, args.out, args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InfeasibleLevelError, InfeasibleRayError) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except RuntimeError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    if code != EXIT_OK and not args.quiet:
        label = {EXIT_CONFIG: "config error", EXIT_NOCONV: "non-convergence",
                 EXIT_VERIFY: "verification failure"}[code]
        print(f"exit {code}: {label}")
    return code


if __name__ == "__main__":
    sys.exit(main())
