"""Thin wrappers around scipy's HiGHS linear programming for feasibility questions.

Solver breakdown is kept distinct from a clean "infeasible" answer: the former
raises LpSolverError, the latter is an ordinary result.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


class LpSolverError(RuntimeError):
    """The LP solver failed for numerical reasons (not a feasibility verdict)."""


def solve_feasibility(
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    n_vars: int,
    bounds: tuple[float | None, float | None] = (0.0, None),
) -> tuple[bool, np.ndarray | None]:
    """Decide whether {x : A_eq x = b_eq, bounds} is nonempty; return a point if so."""
    res = linprog(
        c=np.zeros(n_vars),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[bounds] * n_vars,
        method="highs",
    )
    if res.status == 0:
        return True, res.x
    if res.status == 2:
        return False, None
    raise LpSolverError(f"LP solver failed with status {res.status}: {res.message}")


def solve_feasibility_mixed(
    a_eq: np.ndarray | None,
    b_eq: np.ndarray | None,
    a_ub: np.ndarray | None,
    b_ub: np.ndarray | None,
    n_vars: int,
) -> tuple[bool, np.ndarray | None]:
    """Feasibility with equality and inequality blocks and free variables."""
    res = linprog(
        c=np.zeros(n_vars),
        A_eq=a_eq,
        b_eq=b_eq,
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * n_vars,
        method="highs",
    )
    if res.status == 0:
        return True, res.x
    if res.status == 2:
        return False, None
    raise LpSolverError(f"LP solver failed with status {res.status}: {res.message}")


def polytope_contains(vertices: np.ndarray, point: np.ndarray, tol: float = 1e-9) -> bool:
    """Is point a convex combination of the given vertices?

    Solved as an LP feasibility problem with a tol-relaxed coordinate match so
    that boundary points survive double-precision roundoff.
    """
    verts = np.atleast_2d(np.asarray(vertices, dtype=float))
    point = np.asarray(point, dtype=float).reshape(-1)
    n, d = verts.shape
    if n == 0:
        return False
    if point.shape != (d,):
        raise ValueError("point dimension does not match vertices")
    # Exact vertex hit short-circuits the LP (common for deterministic states).
    if np.any(np.all(np.abs(verts - point) <= tol, axis=1)):
        return True
    # tol-relaxed coordinate match: verts.T @ w within [point - tol, point + tol].
    a_ub = np.vstack([verts.T, -verts.T])
    b_ub = np.concatenate([point + tol, -(point - tol)])
    res = linprog(
        c=np.zeros(n),
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
        bounds=[(0.0, None)] * n,
        method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise LpSolverError(f"LP solver failed with status {res.status}: {res.message}")
