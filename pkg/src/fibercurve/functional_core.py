"""Homogeneous functional triples and the maps built on top of them.

The whole library works with a triple of even functionals (N, A, B) on R^dim,
positively homogeneous of degrees eta, alpha, beta with 1 < alpha < eta < beta.
N is the coercive part (N(u) > 0 for u != 0), A carries the sign-indefinite
concave weight and B the sign-indefinite convex weight.  The parametrized
energy is

    phi(lam, u) = N(u)/eta - lam*A(u)/alpha - B(u)/beta,

and the unique parameter placing u at energy level c is

    lambda_of(c, u) = (N(u)/eta - B(u)/beta - c) / (A(u)/alpha),

defined wherever A(u) != 0.  Everything downstream (fibering maps, sphere
optimization, curve tracing) consumes triples only through this interface, so
toy closed-form triples and grid discretizations share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable

import numpy as np

Array = np.ndarray

__all__ = [
    "Array",
    "ConeTag",
    "Exponents",
    "FunctionalTriple",
    "cone_membership",
    "lambda_of",
    "phi",
    "phi_grad",
]


@dataclass(frozen=True)
class Exponents:
    """Homogeneity degrees (alpha, eta, beta), validated to 1 < alpha < eta < beta."""

    alpha: float
    eta: float
    beta: float

    def __post_init__(self) -> None:
        a, e, b = self.alpha, self.eta, self.beta
        if not (np.isfinite(a) and np.isfinite(e) and np.isfinite(b)):
            raise ValueError(f"exponents must be finite, got ({a}, {e}, {b})")
        if not (1.0 < a < e < b):
            raise ValueError(
                "exponent ordering violated: need 1 < alpha < eta < beta, "
                f"got alpha={a}, eta={e}, beta={b}"
            )


class ConeTag(Enum):
    """Open cones in which sphere optimization is run.

    A_POS        : A(u) > 0
    A_POS_B_POS  : A(u) > 0 and B(u) > 0
    A_NEG        : A(u) < 0
    A_NEG_B_POS  : A(u) < 0 and B(u) > 0
    """

    A_POS = "a_pos"
    A_POS_B_POS = "a_pos_b_pos"
    A_NEG = "a_neg"
    A_NEG_B_POS = "a_neg_b_pos"

    @property
    def a_sign(self) -> float:
        return -1.0 if self in (ConeTag.A_NEG, ConeTag.A_NEG_B_POS) else 1.0

    @property
    def needs_b_pos(self) -> bool:
        return self in (ConeTag.A_POS_B_POS, ConeTag.A_NEG_B_POS)


@dataclass(frozen=True)
class FunctionalTriple:
    """Even homogeneous triple (N, A, B) with gradients and a problem norm.

    eval_* return floats, grad_* return arrays of shape (dim,).  The norm is
    the one used for unit spheres; by default it is N(u)**(1/eta), which for
    the discrete Dirichlet and truncated whole-space builds is exactly the
    discrete W^{1,p} norm.  Every callable must be homogeneous of the declared
    degree and even; property tests enforce this on randomized inputs.
    """

    exponents: Exponents
    dim: int
    eval_N: Callable[[Array], float]
    eval_A: Callable[[Array], float]
    eval_B: Callable[[Array], float]
    grad_N: Callable[[Array], Array]
    grad_A: Callable[[Array], Array]
    grad_B: Callable[[Array], Array]
    norm: Callable[[Array], float] | None = None
    diagnostics: tuple[str, ...] = field(default=())

    def norm_of(self, u: Array) -> float:
        if self.norm is not None:
            return float(self.norm(u))
        return float(self.eval_N(u)) ** (1.0 / self.exponents.eta)

    def with_negated_a(self) -> "FunctionalTriple":
        """Triple with A replaced by -A.

        The negative-cone branches reduce to positive-cone runs on this
        flipped triple with the parameter negated afterwards, because
        phi(lam, u; A) = phi(-lam, u; -A).
        """
        ea, ga = self.eval_A, self.grad_A
        return replace(
            self,
            eval_A=lambda u: -float(ea(u)),
            grad_A=lambda u: -np.asarray(ga(u)),
        )


def phi(triple: FunctionalTriple, lam: float, u: Array) -> float:
    """Energy N(u)/eta - lam*A(u)/alpha - B(u)/beta."""
    exps = triple.exponents
    value = (
        float(triple.eval_N(u)) / exps.eta
        - lam * float(triple.eval_A(u)) / exps.alpha
        - float(triple.eval_B(u)) / exps.beta
    )
    if not np.isfinite(value):
        raise ValueError("non-finite energy value; discretization data invalid")
    return value


def phi_grad(triple: FunctionalTriple, lam: float, u: Array) -> Array:
    """Coefficient gradient of phi at fixed lam: grad N/eta - lam grad A/alpha - grad B/beta."""
    exps = triple.exponents
    grad = (
        np.asarray(triple.grad_N(u), dtype=float) / exps.eta
        - lam * np.asarray(triple.grad_A(u), dtype=float) / exps.alpha
        - np.asarray(triple.grad_B(u), dtype=float) / exps.beta
    )
    if not np.all(np.isfinite(grad)):
        raise ValueError("non-finite energy gradient; discretization data invalid")
    return grad


def lambda_of(triple: FunctionalTriple, c: float, u: Array) -> float:
    """The unique parameter with phi(lambda_of(c, u), u) = c; needs A(u) != 0."""
    exps = triple.exponents
    a = float(triple.eval_A(u))
    if a == 0.0:
        raise ZeroDivisionError("lambda_of undefined: A(u) = 0 (u outside both A-cones)")
    value = (
        float(triple.eval_N(u)) / exps.eta - float(triple.eval_B(u)) / exps.beta - c
    ) / (a / exps.alpha)
    if not np.isfinite(value):
        raise ValueError("non-finite parameter value; discretization data invalid")
    return value


def cone_membership(
    triple: FunctionalTriple, tag: ConeTag, u: Array
) -> tuple[bool, float]:
    """Strict cone test returning (member, margin).

    The margin is the smallest of the strict quantities defining the cone
    (sign-adjusted A, and B where required), so membership holds exactly when
    margin > 0.  The zero vector has margin 0 and is never a member.
    """
    a = float(triple.eval_A(u))
    margin = tag.a_sign * a
    if tag.needs_b_pos:
        margin = min(margin, float(triple.eval_B(u)))
    return margin > 0.0, margin
