"""Discretized model problems producing functional triples.

Two families are covered, both on uniform grids with forward-difference
gradients per cell and trapezoid-type quadrature (cell value = cell weight
times the mean of the integrand over the cell's corner nodes):

* Dirichlet p-Laplacian on a box: N(u) = sum |grad_h u|^p vol over cells,
  degrees of freedom are the interior nodes, boundary nodes are fixed at 0.
* Truncated whole-space problem on [-L, L]^dim: N(u) = sum (|grad_h u|^p
  + mean |u|^p) vol, every node is a degree of freedom, and the weights are
  expected to decay so the truncation is meaningful (checked, warning only).

Weights a (concave term) and b (convex term) live on cells.  They come from
expression strings evaluated at cell midpoints (grammar: + - * / ^, sin, cos,
exp, abs, constants, variables x and y) or from CSV files (one value per line
in 1D; a "rows,cols" header then row-major rows in 2D).

The flat degree-of-freedom ordering is C order over grid indices (x index
varies slowest in 2D).
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .functional_core import ConeTag, Exponents, FunctionalTriple

Array = np.ndarray

__all__ = [
    "Grid",
    "PLaplacianProblem",
    "WeightField",
    "build_dirichlet_triple",
    "build_disjoint_basis",
    "build_triple",
    "build_truncated_rn_triple",
    "cone_node_mask",
    "construct_weight_for_conjecture",
    "dirichlet_problem_1d",
    "dirichlet_problem_2d",
    "eval_weight_expression",
    "sign_masks",
    "truncated_problem_1d",
    "weights_from_csv",
    "weights_from_expressions",
]


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid. n_nodes counts nodes per axis including endpoints."""

    dimension: int
    bounds: tuple[tuple[float, float], ...]
    n_nodes: tuple[int, ...]
    dirichlet: bool = True

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2):
            raise ValueError(f"grid dimension must be 1 or 2, got {self.dimension}")
        if len(self.bounds) != self.dimension or len(self.n_nodes) != self.dimension:
            raise ValueError("bounds and n_nodes must have one entry per axis")
        for (lo, hi), n in zip(self.bounds, self.n_nodes):
            if not (hi > lo):
                raise ValueError(f"empty axis bounds ({lo}, {hi})")
            min_nodes = 5 if self.dirichlet else 3
            if n < min_nodes:
                raise ValueError(
                    f"axis with {n} nodes rejected: need at least 3 interior nodes"
                    if self.dirichlet
                    else f"axis with {n} nodes rejected: need at least {min_nodes} nodes"
                )

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((hi - lo) / (n - 1) for (lo, hi), n in zip(self.bounds, self.n_nodes))

    @property
    def cell_shape(self) -> tuple[int, ...]:
        return tuple(n - 1 for n in self.n_nodes)

    @property
    def dof_shape(self) -> tuple[int, ...]:
        if self.dirichlet:
            return tuple(n - 2 for n in self.n_nodes)
        return self.n_nodes

    @property
    def n_dof(self) -> int:
        return int(np.prod(self.dof_shape))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def node_coords(self, axis: int) -> Array:
        lo, hi = self.bounds[axis]
        return np.linspace(lo, hi, self.n_nodes[axis])

    def cell_midpoints(self, axis: int) -> Array:
        x = self.node_coords(axis)
        return 0.5 * (x[:-1] + x[1:])

    def midpoint_mesh(self) -> dict[str, Array]:
        """Cell-midpoint coordinate arrays keyed by variable name, cell-shaped."""
        if self.dimension == 1:
            return {"x": self.cell_midpoints(0)}
        mx, my = np.meshgrid(self.cell_midpoints(0), self.cell_midpoints(1), indexing="ij")
        return {"x": mx, "y": my}


# ---------------------------------------------------------------------------
# weight expressions and files

_EXPR_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs}
_EXPR_CONSTS = {"pi": math.pi, "e": math.e}
_EXPR_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


def eval_weight_expression(expr: str, coords: dict[str, Array]):
    """Evaluate a weight expression over coordinate arrays.

    Grammar: binary + - * / ^, unary minus, calls to sin/cos/exp/abs, numeric
    constants, names pi and e, and the coordinate variables present in coords.
    Anything else is rejected by name.
    """
    try:
        tree = ast.parse(expr.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse weight expression {expr!r}: {exc}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, (int, float)):
                return float(node.value)
            raise ValueError(f"non-numeric constant {node.value!r} in weight expression")
        if isinstance(node, ast.Name):
            if node.id in coords:
                return coords[node.id]
            if node.id in _EXPR_CONSTS:
                return _EXPR_CONSTS[node.id]
            raise ValueError(f"unknown name {node.id!r} in weight expression")
        if isinstance(node, ast.BinOp):
            op = _EXPR_BINOPS.get(type(node.op))
            if op is None:
                raise ValueError(
                    f"operator {type(node.op).__name__} not allowed in weight expression"
                )
            return op(walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, ast.USub):
                return np.negative(walk(node.operand))
            if isinstance(node.op, ast.UAdd):
                return walk(node.operand)
            raise ValueError(
                f"operator {type(node.op).__name__} not allowed in weight expression"
            )
        if isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in _EXPR_FUNCS:
                raise ValueError("only sin, cos, exp, abs calls allowed in weight expression")
            if len(node.args) != 1 or node.keywords:
                raise ValueError(f"{node.func.id} takes exactly one argument")
            return _EXPR_FUNCS[node.func.id](walk(node.args[0]))
        raise ValueError(f"construct {type(node).__name__} not allowed in weight expression")

    value = walk(tree)
    out = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"weight expression {expr!r} produced non-finite values")
    return out


@dataclass(frozen=True)
class WeightField:
    """Cell values of the concave weight a and convex weight b, plus provenance.

    provenance is a triple (kind, a_source, b_source) with kind "expression",
    "csv" or "array"; expression provenance enables the truncation doubling
    check for whole-space problems.
    """

    a: Array
    b: Array
    provenance: tuple[str, str, str] = ("array", "", "")

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.a.shape != self.b.shape:
            raise ValueError(f"weight shapes differ: {self.a.shape} vs {self.b.shape}")
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise ValueError("weights must be finite")


def weights_from_expressions(grid: Grid, a_expr: str, b_expr: str) -> WeightField:
    coords = grid.midpoint_mesh()
    a = np.broadcast_to(eval_weight_expression(a_expr, coords), grid.cell_shape).copy()
    b = np.broadcast_to(eval_weight_expression(b_expr, coords), grid.cell_shape).copy()
    return WeightField(a=a, b=b, provenance=("expression", a_expr, b_expr))


def _read_weight_csv(path: str, cell_shape: tuple[int, ...]) -> Array:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(cell_shape) == 1:
        try:
            values = np.array([float(ln) for ln in lines])
        except ValueError as exc:
            raise ValueError(f"bad value in weight file {path}: {exc}") from None
        if values.shape != cell_shape:
            raise ValueError(
                f"weight file {path} has {values.size} values, grid needs {cell_shape[0]}"
            )
        return values
    header = lines[0].split(",")
    if len(header) != 2:
        raise ValueError(f'weight file {path} must start with a "rows,cols" header')
    rows, cols = (int(tok) for tok in header)
    if (rows, cols) != cell_shape:
        raise ValueError(
            f"weight file {path} declares {rows}x{cols} cells, grid needs "
            f"{cell_shape[0]}x{cell_shape[1]}"
        )
    flat: list[float] = []
    for ln in lines[1:]:
        flat.extend(float(tok) for tok in ln.split(",") if tok.strip())
    if len(flat) != rows * cols:
        raise ValueError(f"weight file {path} has {len(flat)} values, expected {rows * cols}")
    return np.array(flat).reshape(rows, cols)


def weights_from_csv(grid: Grid, a_path: str, b_path: str) -> WeightField:
    a = _read_weight_csv(a_path, grid.cell_shape)
    b = _read_weight_csv(b_path, grid.cell_shape)
    return WeightField(a=a, b=b, provenance=("csv", a_path, b_path))


# ---------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class PLaplacianProblem:
    """Grid + weights + exponents for one discretized model problem.

    kind is "dirichlet" or "truncated_rn".  eta equals p.  p < 2 is rejected
    unless eps_reg > 0 turns on the smoothed gradient magnitude
    (|g|^2 + eps_reg^2)^(1/2), which trades exact homogeneity for
    differentiability.
    """

    grid: Grid
    weights: WeightField
    p: float
    alpha: float
    beta: float
    eps_reg: float = 0.0
    kind: str = "dirichlet"

    def __post_init__(self) -> None:
        if self.kind not in ("dirichlet", "truncated_rn"):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        Exponents(self.alpha, self.p, self.beta)  # validates 1 < alpha < p < beta
        if self.eps_reg < 0.0:
            raise ValueError("eps_reg must be nonnegative")
        if self.p < 2.0 and self.eps_reg == 0.0:
            raise ValueError(
                "p < 2 rejected by default policy: the gradient kernel is not "
                "differentiable; pass eps_reg > 0 to opt into smoothing"
            )
        if self.weights.a.shape != self.grid.cell_shape:
            raise ValueError(
                f"weights shaped {self.weights.a.shape} do not match grid cells "
                f"{self.grid.cell_shape}"
            )
        if self.kind == "truncated_rn":
            if self.grid.dirichlet:
                raise ValueError("truncated whole-space problems use dirichlet=False grids")
            if not (self.p > self.grid.dimension):
                raise ValueError(
                    f"truncated whole-space problems need p > dimension, got "
                    f"p={self.p}, dimension={self.grid.dimension}"
                )
        elif not self.grid.dirichlet:
            raise ValueError("dirichlet problems need a dirichlet grid")

    @property
    def exponents(self) -> Exponents:
        return Exponents(self.alpha, self.p, self.beta)

    def sobolev_warning(self) -> str | None:
        """Warn when beta reaches the critical embedding exponent (never for p >= dim)."""
        d, p = self.grid.dimension, self.p
        if p >= d:
            return None
        p_star = d * p / (d - p)
        if self.beta >= p_star:
            return (
                f"beta={self.beta} is at or above the critical exponent {p_star:.6g}; "
                "the continuum problem may lose compactness"
            )
        return None


def dirichlet_problem_1d(
    n_interior: int,
    a_expr: str,
    b_expr: str,
    p: float = 2.0,
    alpha: float = 1.5,
    beta: float = 4.0,
    bounds: tuple[float, float] = (0.0, 1.0),
    eps_reg: float = 0.0,
) -> PLaplacianProblem:
    grid = Grid(1, (bounds,), (n_interior + 2,), dirichlet=True)
    weights = weights_from_expressions(grid, a_expr, b_expr)
    return PLaplacianProblem(grid, weights, p, alpha, beta, eps_reg, "dirichlet")


def dirichlet_problem_2d(
    n_interior: tuple[int, int],
    a_expr: str,
    b_expr: str,
    p: float = 2.0,
    alpha: float = 1.5,
    beta: float = 4.0,
    bounds: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0)),
    eps_reg: float = 0.0,
) -> PLaplacianProblem:
    grid = Grid(2, bounds, (n_interior[0] + 2, n_interior[1] + 2), dirichlet=True)
    weights = weights_from_expressions(grid, a_expr, b_expr)
    return PLaplacianProblem(grid, weights, p, alpha, beta, eps_reg, "dirichlet")


def truncated_problem_1d(
    n_nodes: int,
    radius: float,
    a_expr: str,
    b_expr: str,
    p: float = 3.0,
    alpha: float = 1.5,
    beta: float = 4.0,
    eps_reg: float = 0.0,
) -> PLaplacianProblem:
    grid = Grid(1, ((-radius, radius),), (n_nodes,), dirichlet=False)
    weights = weights_from_expressions(grid, a_expr, b_expr)
    return PLaplacianProblem(grid, weights, p, alpha, beta, eps_reg, "truncated_rn")


# ---------------------------------------------------------------------------
# node-weight assembly (trapezoid quadrature)


def _node_weights_from_cells(grid: Grid, cell_values: Array) -> Array:
    """Scatter cell weights to nodes: each cell spreads evenly to its corners.

    The trapezoid quadrature sum over cells of w_cell * vol * mean_corners(f)
    equals the node sum of (scattered weight) * vol * f(node).
    """
    shape = grid.n_nodes
    out = np.zeros(shape)
    if grid.dimension == 1:
        out[:-1] += 0.5 * cell_values
        out[1:] += 0.5 * cell_values
    else:
        out[:-1, :-1] += 0.25 * cell_values
        out[1:, :-1] += 0.25 * cell_values
        out[:-1, 1:] += 0.25 * cell_values
        out[1:, 1:] += 0.25 * cell_values
    return out


def _dof_node_weights(grid: Grid, cell_values: Array) -> Array:
    full = _node_weights_from_cells(grid, cell_values)
    if grid.dirichlet:
        if grid.dimension == 1:
            return full[1:-1]
        return full[1:-1, 1:-1]
    return full


def _embed(grid: Grid, u: Array) -> Array:
    """Place a flat DOF vector into the full node array (zero boundary if Dirichlet)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n_dof,):
        raise ValueError(f"expected {grid.n_dof} coefficients, got shape {u.shape}")
    if not grid.dirichlet:
        return u.reshape(grid.n_nodes)
    full = np.zeros(grid.n_nodes)
    if grid.dimension == 1:
        full[1:-1] = u
    else:
        full[1:-1, 1:-1] = u.reshape(grid.dof_shape)
    return full


def _restrict(grid: Grid, full: Array) -> Array:
    if not grid.dirichlet:
        return full.ravel()
    if grid.dimension == 1:
        return full[1:-1].copy()
    return full[1:-1, 1:-1].ravel()


# ---------------------------------------------------------------------------
# triples


def _power_term(grid: Grid, node_w: Array, exponent: float):
    """Quadrature sum node_w * |u|^exponent * vol and its coefficient gradient."""
    vol = grid.cell_volume

    def value(u: Array) -> float:
        u = np.asarray(u, dtype=float)
        return float(np.sum(node_w * np.abs(u) ** exponent) * vol)

    def grad(u: Array) -> Array:
        u = np.asarray(u, dtype=float)
        return node_w * exponent * np.abs(u) ** (exponent - 1.0) * np.sign(u) * vol

    return value, grad


def _gradient_part_1d(grid: Grid, p: float, eps_reg: float):
    h = grid.spacing[0]

    def value(full: Array) -> float:
        d = np.diff(full) / h
        return float(np.sum((d * d + eps_reg * eps_reg) ** (p / 2.0)) * h)

    def grad_full(full: Array) -> Array:
        d = np.diff(full) / h
        psi = (d * d + eps_reg * eps_reg) ** ((p - 2.0) / 2.0) * d
        out = np.zeros_like(full)
        out[:-1] -= p * psi
        out[1:] += p * psi
        return out

    return value, grad_full


def _gradient_part_2d(grid: Grid, p: float, eps_reg: float):
    hx, hy = grid.spacing
    vol = grid.cell_volume

    def value(full: Array) -> float:
        gx = (full[1:, :-1] - full[:-1, :-1]) / hx
        gy = (full[:-1, 1:] - full[:-1, :-1]) / hy
        mag2 = gx * gx + gy * gy + eps_reg * eps_reg
        return float(np.sum(mag2 ** (p / 2.0)) * vol)

    def grad_full(full: Array) -> Array:
        gx = (full[1:, :-1] - full[:-1, :-1]) / hx
        gy = (full[:-1, 1:] - full[:-1, :-1]) / hy
        mag2 = gx * gx + gy * gy + eps_reg * eps_reg
        w = p * mag2 ** ((p - 2.0) / 2.0)
        cx = w * gx * vol / hx
        cy = w * gy * vol / hy
        out = np.zeros_like(full)
        out[:-1, :-1] -= cx
        out[1:, :-1] += cx
        out[:-1, :-1] -= cy
        out[:-1, 1:] += cy
        return out

    return value, grad_full


def _decay_diagnostics(problem: PLaplacianProblem) -> tuple[str, ...]:
    """Truncation health checks for whole-space problems; warnings, never errors."""
    notes: list[str] = []
    grid = problem.grid
    for name, cell in (("a", problem.weights.a), ("b", problem.weights.b)):
        total = float(np.sum(np.abs(cell))) * grid.cell_volume
        if total == 0.0:
            continue
        if grid.dimension == 1:
            q = max(1, cell.shape[0] // 4)
            tail = float(np.sum(np.abs(cell[:q])) + np.sum(np.abs(cell[-q:]))) * grid.cell_volume
        else:
            qx = max(1, cell.shape[0] // 4)
            qy = max(1, cell.shape[1] // 4)
            inner = float(np.sum(np.abs(cell[qx:-qx, qy:-qy]))) * grid.cell_volume
            tail = total - inner
        if tail / total > 0.2:
            notes.append(
                f"weight {name} carries {tail / total:.1%} of its mass in the outer "
                "quarter of the truncated domain; the truncation radius may be too small"
            )
    kind, a_src, b_src = problem.weights.provenance
    if kind == "expression":
        lo, hi = grid.bounds[0]
        radius = 0.5 * (hi - lo)
        doubled = Grid(
            grid.dimension,
            tuple((-2.0 * radius, 2.0 * radius) for _ in range(grid.dimension)),
            tuple(2 * (n - 1) + 1 for n in grid.n_nodes),
            dirichlet=False,
        )
        coords = doubled.midpoint_mesh()
        for name, src, cell in (("a", a_src, problem.weights.a), ("b", b_src, problem.weights.b)):
            mass = float(np.sum(np.abs(cell))) * grid.cell_volume
            mass2 = float(np.sum(np.abs(eval_weight_expression(src, coords)))) * doubled.cell_volume
            if mass > 0.0 and (mass2 - mass) / mass > 0.01:
                notes.append(
                    f"weight {name} gains {(mass2 - mass) / mass:.1%} more absolute mass when "
                    "the truncation radius doubles; it may not be integrable"
                )
    return tuple(notes)


def build_dirichlet_triple(problem: PLaplacianProblem) -> FunctionalTriple:
    """Triple for the Dirichlet problem; N is the p-th power of the W^{1,p} seminorm."""
    if problem.kind != "dirichlet":
        raise ValueError("build_dirichlet_triple needs a dirichlet problem")
    grid = problem.grid
    exps = problem.exponents
    if grid.dimension == 1:
        n_value, n_grad_full = _gradient_part_1d(grid, problem.p, problem.eps_reg)
    else:
        n_value, n_grad_full = _gradient_part_2d(grid, problem.p, problem.eps_reg)
    abar = _dof_node_weights(grid, problem.weights.a).ravel()
    bbar = _dof_node_weights(grid, problem.weights.b).ravel()
    a_value, a_grad = _power_term(grid, abar, problem.alpha)
    b_value, b_grad = _power_term(grid, bbar, problem.beta)

    diagnostics: list[str] = []
    warning = problem.sobolev_warning()
    if warning:
        diagnostics.append(warning)

    def eval_n(u: Array) -> float:
        return n_value(_embed(grid, u))

    def grad_n(u: Array) -> Array:
        return _restrict(grid, n_grad_full(_embed(grid, u)))

    return FunctionalTriple(
        exponents=exps,
        dim=grid.n_dof,
        eval_N=eval_n,
        eval_A=a_value,
        eval_B=b_value,
        grad_N=grad_n,
        grad_A=a_grad,
        grad_B=b_grad,
        diagnostics=tuple(diagnostics),
    )


def build_truncated_rn_triple(problem: PLaplacianProblem) -> FunctionalTriple:
    """Triple for the truncated whole-space problem: N adds the |u|^p mass term."""
    if problem.kind != "truncated_rn":
        raise ValueError("build_truncated_rn_triple needs a truncated_rn problem")
    grid = problem.grid
    exps = problem.exponents
    if grid.dimension == 1:
        n_value, n_grad_full = _gradient_part_1d(grid, problem.p, problem.eps_reg)
    else:
        n_value, n_grad_full = _gradient_part_2d(grid, problem.p, problem.eps_reg)
    ones = np.ones(grid.cell_shape)
    mass_w = _dof_node_weights(grid, ones).ravel()
    m_value, m_grad = _power_term(grid, mass_w, problem.p)
    abar = _dof_node_weights(grid, problem.weights.a).ravel()
    bbar = _dof_node_weights(grid, problem.weights.b).ravel()
    a_value, a_grad = _power_term(grid, abar, problem.alpha)
    b_value, b_grad = _power_term(grid, bbar, problem.beta)

    diagnostics = list(_decay_diagnostics(problem))
    warning = problem.sobolev_warning()
    if warning:
        diagnostics.append(warning)

    def eval_n(u: Array) -> float:
        return n_value(_embed(grid, u)) + m_value(u)

    def grad_n(u: Array) -> Array:
        return _restrict(grid, n_grad_full(_embed(grid, u))) + m_grad(u)

    return FunctionalTriple(
        exponents=exps,
        dim=grid.n_dof,
        eval_N=eval_n,
        eval_A=a_value,
        eval_B=b_value,
        grad_N=grad_n,
        grad_A=a_grad,
        grad_B=b_grad,
        diagnostics=tuple(diagnostics),
    )


def build_triple(problem: PLaplacianProblem) -> FunctionalTriple:
    if problem.kind == "dirichlet":
        return build_dirichlet_triple(problem)
    return build_truncated_rn_triple(problem)


# ---------------------------------------------------------------------------
# sign structure, start supports, surrogate bases


def sign_masks(problem: PLaplacianProblem) -> dict[str, Array]:
    """Flat cell index sets by strict sign of each weight.

    Keys A_PLUS, A_MINUS, A_ZERO, B_PLUS, B_MINUS, B_ZERO; the three sets of
    each weight partition the cell index range.
    """
    out: dict[str, Array] = {}
    for name, cell in (("A", problem.weights.a), ("B", problem.weights.b)):
        flat = cell.ravel()
        out[f"{name}_PLUS"] = np.flatnonzero(flat > 0.0)
        out[f"{name}_MINUS"] = np.flatnonzero(flat < 0.0)
        out[f"{name}_ZERO"] = np.flatnonzero(flat == 0.0)
    return out


def _nodes_with_all_adjacent_cells(grid: Grid, cell_ok: Array) -> Array:
    """Boolean DOF mask of nodes whose every adjacent cell satisfies cell_ok."""
    if grid.dimension == 1:
        n = grid.n_nodes[0]
        ok = np.empty(n, dtype=bool)
        ok[0] = cell_ok[0]
        ok[-1] = cell_ok[-1]
        ok[1:-1] = cell_ok[:-1] & cell_ok[1:]
    else:
        acc = np.zeros(grid.n_nodes, dtype=int)
        cnt = np.zeros(grid.n_nodes, dtype=int)
        for sl in ((slice(None, -1), slice(None, -1)), (slice(1, None), slice(None, -1)),
                   (slice(None, -1), slice(1, None)), (slice(1, None), slice(1, None))):
            acc[sl] += cell_ok.astype(int)
            cnt[sl] += 1
        ok = acc == cnt
    if grid.dirichlet:
        if grid.dimension == 1:
            return ok[1:-1]
        return ok[1:-1, 1:-1].ravel()
    return ok.ravel()


def cone_node_mask(problem: PLaplacianProblem, tag: ConeTag) -> Array:
    """DOF mask of nodes where any supported vector is guaranteed inside the cone.

    A node qualifies when every adjacent cell has the required strict weight
    signs (a of the tag's sign; b > 0 where the tag demands it), so the
    trapezoid quadrature of any vector supported on qualifying nodes has the
    right signs.
    """
    a_cell = problem.weights.a * tag.a_sign
    ok = a_cell > 0.0
    if tag.needs_b_pos:
        ok = ok & (problem.weights.b > 0.0)
    return _nodes_with_all_adjacent_cells(problem.grid, ok)


def build_disjoint_basis(problem: PLaplacianProblem, tag: ConeTag, k: int) -> Array:
    """k unit vectors with pairwise disjoint node supports inside the cone mask.

    The qualifying nodes are split into k blocks along the first grid axis
    with a one-column gap between consecutive blocks, so any nonzero linear
    combination stays strictly inside the cone (the quadrature decomposes over
    the disjoint supports).  Raises when the mask cannot host k such blocks.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    from .functional_core import cone_membership  # local to avoid polluting module API

    mask = cone_node_mask(problem, tag)
    grid = problem.grid
    dof_shape = grid.dof_shape
    mask_grid = mask.reshape(dof_shape)
    axis_has = mask_grid.any(axis=1) if grid.dimension == 2 else mask_grid
    cols = np.flatnonzero(axis_has)
    if cols.size < 2 * k - 1:
        raise ValueError(
            f"cone support spans {cols.size} grid columns; cannot host {k} disjoint blocks"
        )
    # split the support columns into k nearly equal runs, dropping one column between runs
    pieces = np.array_split(cols, k)
    triple = build_triple(problem)
    basis = np.zeros((k, grid.n_dof))
    for i, piece in enumerate(pieces):
        use = piece[:-1] if i < k - 1 and piece.size > 1 else piece
        block = np.zeros(dof_shape, dtype=bool)
        if grid.dimension == 1:
            block[use] = True
        else:
            block[use, :] = True
        sel = block.ravel() & mask
        if not sel.any():
            raise ValueError(f"disjoint block {i} is empty; refine the grid or lower k")
        v = np.zeros(grid.n_dof)
        v[sel] = 1.0
        v /= triple.norm_of(v)
        member, margin = cone_membership(triple, tag, v)
        if not member:
            raise ValueError(
                f"disjoint block {i} failed the cone check (margin {margin!r}); "
                "weights change sign too quickly for this grid"
            )
        basis[i] = v
    return basis


# ---------------------------------------------------------------------------
# conjecture-supporting weight construction


def _bump_values(grid: Grid, center: Sequence[float] | float, radius: float) -> Array:
    """Smooth bump on cells: exp(1 - 1/(1 - r^2)) inside the ball, 0 outside."""
    coords = grid.midpoint_mesh()
    if grid.dimension == 1:
        cx = float(center) if np.isscalar(center) else float(np.asarray(center).ravel()[0])
        r2 = ((coords["x"] - cx) / radius) ** 2
    else:
        cx, cy = (float(v) for v in np.asarray(center).ravel()[:2])
        r2 = ((coords["x"] - cx) / radius) ** 2 + ((coords["y"] - cy) / radius) ** 2
    out = np.zeros(grid.cell_shape)
    inside = r2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
    return out


def construct_weight_for_conjecture(
    problem: PLaplacianProblem,
    bump_center: Sequence[float] | float,
    bump_radius: float,
    eps_schedule: Sequence[float] | None = None,
    multistart: int = 16,
    seed: int = 0,
) -> tuple[WeightField, float]:
    """Concave weight a = b_plus - eps * bump keeping every zero-level minimizer in the A > 0 cone.

    b_plus is the positive part of the problem's convex weight.  The bump must
    sit inside a ball where b_plus vanishes (checked).  The zero-level
    objective and its minimizers depend only on (N, B), so the minimizer set
    is computed once and the largest eps in the schedule with
    A_eps(minimizer) > 0 for every found minimizer is returned.  Raises when
    the schedule is exhausted, naming the violating minimizer.
    """
    from .nehari_minmax import minimize_c0  # deliberate late import; see module notes

    grid = problem.grid
    b_cell = problem.weights.b
    theta = _bump_values(grid, bump_center, bump_radius)
    support = theta > 0.0
    if not support.any():
        raise ValueError("bump support contains no cells; enlarge bump_radius")
    if np.any(b_cell[support] > 0.0):
        raise ValueError(
            "bump support touches cells with b > 0; the construction needs the "
            "positive part of b to vanish on an open ball around the bump"
        )
    b_plus = np.maximum(b_cell, 0.0)
    if eps_schedule is None:
        top = float(np.max(b_plus))
        if top == 0.0:
            raise ValueError("b has no positive part; the construction is empty")
        eps_schedule = [top * 0.5**j for j in range(11)] + [0.0]
    schedule = sorted({float(e) for e in eps_schedule}, reverse=True)
    if any(e < 0.0 for e in schedule):
        raise ValueError("eps_schedule must be nonnegative")

    # minimizers of the zero-level objective over the b > 0 cone
    probe = replace(
        problem,
        weights=WeightField(a=b_plus, b=b_cell, provenance=("array", "b_plus", "b")),
    )
    triple = build_triple(probe)
    support_mask = cone_node_mask(probe, ConeTag.A_POS_B_POS)
    _, minimizers = minimize_c0(
        triple, multistart=multistart, seed=seed, start_support=support_mask
    )

    bplus_bar = _dof_node_weights(grid, b_plus).ravel()
    theta_bar = _dof_node_weights(grid, theta).ravel()
    vol = grid.cell_volume
    pos_part = []
    bump_part = []
    for u in minimizers:
        w = np.abs(u) ** problem.alpha
        pos_part.append(float(np.sum(bplus_bar * w) * vol))
        bump_part.append(float(np.sum(theta_bar * w) * vol))

    for eps in schedule:
        margins = [pa - eps * ba for pa, ba in zip(pos_part, bump_part)]
        worst = min(margins)
        scale = 1.0 + max(abs(m) for m in margins)
        if worst > 1e-12 * scale:
            a_cell = b_plus - eps * theta
            return (
                WeightField(
                    a=a_cell,
                    b=b_cell,
                    provenance=("array", f"b_plus - {eps!r} * bump", "b"),
                ),
                eps,
            )
    bad = int(np.argmin([pa - schedule[-1] * ba for pa, ba in zip(pos_part, bump_part)]))
    raise ValueError(
        f"eps schedule exhausted: zero-level minimizer #{bad} has "
        f"A = {pos_part[bad] - schedule[-1] * bump_part[bad]!r} at eps={schedule[-1]!r}"
    )
