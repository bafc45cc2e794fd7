"""Unsharp observables, joint-measurability tests, and meta-compatibility tools.

Two dichotomic observables are jointly measurable over a state space when a
four-outcome master measurement exists whose row and column marginals
reproduce them.  Over polytopes the search is a linear program in the effect
coefficients; for the rebit the known quadratic criterion is used.  The toy
bit's master-effect table and Fine's joint-distribution construction expose
the "meta-compatibility" that keeps a perfectly steerable theory Bell-local.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import ALG_TOL, Effect, Measurement, StateSpace
from .lp import solve_feasibility_mixed
from .theories import BipartiteState, make_spekkens, make_spekkens_entangled, spekkens_state

KAPPA_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UnsharpObservable:
    """A dichotomic observable smeared toward the coin flip: kappa O + (1-kappa) I/2."""

    base: Measurement
    kappa: float

    def __post_init__(self):
        if self.base.n_outcomes != 2:
            raise ValueError("unsharp observables are defined for dichotomic measurements")
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError("kappa must lie in (0, 1]")

    @property
    def measurement(self) -> Measurement:
        k = self.kappa
        effects = tuple(
            Effect(k * e.linear, k * e.offset + 0.5 * (1.0 - k)) for e in self.base.effects
        )
        return Measurement(f"{self.base.label}^({k:g})", effects)


def unsharpen(m: Measurement, kappa: float) -> UnsharpObservable:
    """Smear a dichotomic measurement by kappa."""
    return UnsharpObservable(m, float(kappa))


def _as_measurement(obs: Measurement | UnsharpObservable) -> Measurement:
    return obs.measurement if isinstance(obs, UnsharpObservable) else obs


def master_effect_lp(
    o1: Measurement | UnsharpObservable,
    o2: Measurement | UnsharpObservable,
    space: StateSpace,
) -> tuple[tuple[Effect, ...], ...] | None:
    """Find master effects M[j, k] on a polytope, or None when none exist.

    Each M[j, k] must be a valid effect (value in [0, 1] on every vertex),
    with row sums reproducing o1's effects and column sums o2's effects on
    every vertex.  Works at the level of affine functionals on the embedding,
    so for a non-convex theory it answers the meta-compatibility question:
    the master need not be one of the theory's allowed measurements.
    """
    m1, m2 = _as_measurement(o1), _as_measurement(o2)
    verts = np.asarray(space.vertices, dtype=float)
    if verts.shape[0] == 0:
        raise ValueError("master_effect_lp needs a vertex-listed polytope")
    n1, n2 = m1.n_outcomes, m2.n_outcomes
    dim = space.dim
    per = dim + 1  # (linear, offset) per master cell
    n_vars = n1 * n2 * per

    def cell(j: int, k: int) -> slice:
        idx = j * n2 + k
        return slice(idx * per, (idx + 1) * per)

    aug = np.hstack([verts, np.ones((verts.shape[0], 1))])  # value rows [v, 1]

    eq_rows, eq_rhs = [], []
    for j in range(n1):
        targets = aug @ np.concatenate([m1.effects[j].linear, [m1.effects[j].offset]])
        for vi in range(verts.shape[0]):
            row = np.zeros(n_vars)
            for k in range(n2):
                row[cell(j, k)] = aug[vi]
            eq_rows.append(row)
            eq_rhs.append(targets[vi])
    for k in range(n2):
        targets = aug @ np.concatenate([m2.effects[k].linear, [m2.effects[k].offset]])
        for vi in range(verts.shape[0]):
            row = np.zeros(n_vars)
            for j in range(n1):
                row[cell(j, k)] = aug[vi]
            eq_rows.append(row)
            eq_rhs.append(targets[vi])

    ub_rows, ub_rhs = [], []
    for j in range(n1):
        for k in range(n2):
            for vi in range(verts.shape[0]):
                row = np.zeros(n_vars)
                row[cell(j, k)] = aug[vi]
                ub_rows.append(row)
                ub_rhs.append(1.0)
                ub_rows.append(-row)
                ub_rhs.append(0.0)

    feasible, x = solve_feasibility_mixed(
        np.array(eq_rows), np.array(eq_rhs), np.array(ub_rows), np.array(ub_rhs), n_vars
    )
    if not feasible:
        return None
    master = []
    for j in range(n1):
        row = []
        for k in range(n2):
            coeffs = x[cell(j, k)]
            row.append(Effect(coeffs[:dim], float(coeffs[dim])))
        master.append(tuple(row))
    return tuple(master)


def jointly_measurable_lp(
    o1: Measurement | UnsharpObservable,
    o2: Measurement | UnsharpObservable,
    space: StateSpace,
) -> bool:
    """LP joint-measurability verdict over a vertex-listed polytope."""
    return master_effect_lp(o1, o2, space) is not None


def jointly_measurable_rebit(lam: float, mu: float) -> bool:
    """Closed-form criterion for unsharp X and Z on the rebit: lam^2 + mu^2 <= 1."""
    if not (0.0 < lam <= 1.0 and 0.0 < mu <= 1.0):
        raise ValueError("unsharpness parameters must lie in (0, 1]")
    return lam * lam + mu * mu <= 1.0 + KAPPA_TOL


def kappa_opt(tau: float) -> float:
    """Symmetric compatibility threshold 2^(-1/tau) for the tau family."""
    if tau < 1.0:
        raise ValueError("tau must be >= 1")
    return float(2.0 ** (-1.0 / tau))


def alpha_smearing(tau: float) -> float:
    """Ontological smearing 2^(-1 + 1/tau) needed to reach a tau-family observable."""
    if tau < 1.0:
        raise ValueError("tau must be >= 1")
    return float(2.0 ** (-1.0 + 1.0 / tau))


def upsilon_from_kappa(kappa: float, beta: float) -> float:
    """Certainty bound 1 + beta / (2 kappa) implied by a compatibility threshold."""
    if not 0.5 - KAPPA_TOL <= kappa <= 1.0 + KAPPA_TOL:
        raise ValueError("kappa must lie in [1/2, 1]")
    if not 1.0 - KAPPA_TOL <= beta <= 2.0 + KAPPA_TOL:
        raise ValueError("beta must lie in [1, 2]")
    return 1.0 + beta / (2.0 * kappa)


def kappa_from_upsilon(upsilon: float, beta: float) -> float:
    """Invert the certainty/compatibility relation: kappa = beta / (2 (upsilon - 1))."""
    if not 1.0 - KAPPA_TOL <= beta <= 2.0 + KAPPA_TOL:
        raise ValueError("beta must lie in [1, 2]")
    if upsilon <= 1.0:
        raise ValueError("upsilon must exceed 1")
    kappa = beta / (2.0 * (upsilon - 1.0))
    if not 0.5 - 1e-9 <= kappa <= 1.0 + 1e-9:
        raise ValueError(f"kappa {kappa} outside [1/2, 1]: inconsistent parameters")
    return float(min(max(kappa, 0.5), 1.0))


def kappa_opt_bisect(
    m0: Measurement,
    m1: Measurement,
    space: StateSpace,
    tol: float = 1e-6,
) -> float:
    """Largest symmetric unsharpness keeping m0, m1 jointly measurable, by bisection."""
    if jointly_measurable_lp(unsharpen(m0, 1.0), unsharpen(m1, 1.0), space):
        return 1.0
    lo, hi = tol, 1.0  # feasibility is monotone: smaller kappa is always easier
    if not jointly_measurable_lp(unsharpen(m0, lo), unsharpen(m1, lo), space):
        raise ValueError("observables not jointly measurable even at vanishing sharpness")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if jointly_measurable_lp(unsharpen(m0, mid), unsharpen(m1, mid), space):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class FamilyPoint:
    """One member of the tau family with its compatibility/uncertainty parameters."""

    tau: float
    kappa_opt: float
    alpha: float
    upsilon_star: float
    beta: float

    def __post_init__(self):
        if abs(self.kappa_opt - 2.0 ** (-1.0 / self.tau)) > KAPPA_TOL:
            raise ValueError("kappa_opt must equal 2^(-1/tau)")
        if abs(self.alpha - 2.0 ** (-1.0 + 1.0 / self.tau)) > KAPPA_TOL:
            raise ValueError("alpha must equal 2^(-1+1/tau)")
        if abs(self.upsilon_star - (1.0 + self.beta / (2.0 * self.kappa_opt))) > KAPPA_TOL:
            raise ValueError("upsilon_star must equal 1 + beta/(2 kappa_opt)")


def family_point(tau: float, beta: float = 1.0) -> FamilyPoint:
    """Closed-form parameters of the tau family member (beta = 1 is the non-simplicial case)."""
    k = kappa_opt(tau)
    return FamilyPoint(
        tau=float(tau),
        kappa_opt=k,
        alpha=alpha_smearing(tau),
        upsilon_star=1.0 + beta / (2.0 * k),
        beta=float(beta),
    )


# --------------------------------------------------------------------------
# Spekkens master effect and Fine's construction
# --------------------------------------------------------------------------

_EIGENSTATES = {"X": ("x+", "x-"), "Y": ("y+", "y-"), "Z": ("z+", "z-")}


@dataclass(frozen=True, eq=False)
class SpekkensMasterTable:
    """Values M[j, k] . v of the toy-bit master effect on the pair's eigenstates.

    ``values[name]`` is the 2x2 array indexed [j, k] with j the first
    observable's outcome and k the second's; ``master`` is a concrete affine
    realization found by LP over the embedding.
    """

    pair: tuple[str, str]
    values: dict[str, np.ndarray]
    master: tuple[tuple[Effect, ...], ...]


def spekkens_master_effect(pair: tuple[str, str] = ("X", "Z")) -> SpekkensMasterTable:
    """Solve the master-effect system for a pair of toy-bit observables.

    On each eigenstate of the pair, the marginal equations have a unique
    nonnegative solution (one margin is deterministic), namely the product of
    the two margins.  Consistency with the linear dependence of the pure
    states (x+ + x- = z+ + z-) is verified, as is the existence of an affine
    master functional on the embedding.
    """
    theory = make_spekkens()
    m1, m2 = theory.measurement(pair[0]), theory.measurement(pair[1])
    names = _EIGENSTATES[pair[0]] + _EIGENSTATES[pair[1]]
    values: dict[str, np.ndarray] = {}
    for name in names:
        v = spekkens_state(name).point
        rows = np.array([e.value_at(v) for e in m1.effects])
        cols = np.array([e.value_at(v) for e in m2.effects])
        if not (np.any(np.abs(rows - np.round(rows)) < ALG_TOL) or
                np.any(np.abs(cols - np.round(cols)) < ALG_TOL)):
            raise ValueError(f"no deterministic margin on eigenstate {name!r}")
        values[name] = np.outer(rows, cols)

    # Linear dependence of the eigenstate pairs forces matching value sums.
    a, b = _EIGENSTATES[pair[0]]
    c, d = _EIGENSTATES[pair[1]]
    point_sum_gap = (spekkens_state(a).point + spekkens_state(b).point
                     - spekkens_state(c).point - spekkens_state(d).point)
    value_sum_gap = values[a] + values[b] - values[c] - values[d]
    if np.max(np.abs(point_sum_gap)) > ALG_TOL or np.max(np.abs(value_sum_gap)) > ALG_TOL:
        raise ValueError("master-effect table inconsistent with state-space geometry")

    master = master_effect_lp(m1, m2, theory.space)
    if master is None:
        raise ValueError("no affine master effect exists on the toy-bit embedding")
    for name in names:
        v = spekkens_state(name).point
        got = np.array([[master[j][k].value_at(v) for k in range(2)] for j in range(2)])
        if not np.allclose(got, values[name], atol=1e-7, rtol=0.0):
            raise ValueError("LP master effect disagrees with the forced value table")
    return SpekkensMasterTable(pair=pair, values=values, master=master)


def fine_joint_distribution(p_left: np.ndarray, p_right: np.ndarray) -> np.ndarray:
    """Glue two joint distributions sharing a (b0, b1) margin into one over all four.

    Inputs are P(b0, b1, a0) and P(b0, b1, a1); the output is indexed
    (a0, a1, b0, b1) and traces back to each input exactly.
    """
    p_left = np.asarray(p_left, dtype=float)
    p_right = np.asarray(p_right, dtype=float)
    if p_left.shape[:2] != p_right.shape[:2]:
        raise ValueError("inputs must share the (b0, b1) block shape")
    marg_left = p_left.sum(axis=2)
    marg_right = p_right.sum(axis=2)
    if np.max(np.abs(marg_left - marg_right)) > 1e-9:
        raise ValueError("shared margins P(b0, b1) disagree beyond tolerance")
    marg = 0.5 * (marg_left + marg_right)
    n_b0, n_b1, n_a0 = p_left.shape
    n_a1 = p_right.shape[2]
    out = np.zeros((n_a0, n_a1, n_b0, n_b1))
    for b0, b1 in itertools.product(range(n_b0), range(n_b1)):
        m = marg[b0, b1]
        left = p_left[b0, b1, :]
        right = p_right[b0, b1, :]
        if m <= ALG_TOL:
            if left.max(initial=0.0) > ALG_TOL or right.max(initial=0.0) > ALG_TOL:
                raise ValueError("zero margin under nonzero numerator at "
                                 f"(b0, b1) = ({b0}, {b1})")
            continue
        out[:, :, b0, b1] = np.outer(left, right) / m
    return out


def spekkens_fine_analysis(
    state: BipartiteState | None = None,
    alice: tuple[str, str] = ("X", "Z"),
    bob: tuple[str, str] = ("X", "Z"),
) -> dict:
    """Bell analysis of a toy-bit pair through the master effect and Fine gluing.

    The master effect supplies Bob's joint (b0, b1) statistics on each
    conditioned state; Fine's construction then produces a global joint
    distribution, whose pairwise marginals give the CHSH correlation table.
    """
    if state is None:
        state = make_spekkens_entangled()
    table = spekkens_master_effect(bob)

    def bob_joint(x: str) -> np.ndarray:
        rule = state.conditioned(x)
        out = np.zeros((2, 2, len(rule)))
        for a, (p, omega) in enumerate(rule):
            vals = np.array([[table.master[j][k].value_at(omega.point) for k in range(2)]
                             for j in range(2)])
            out[:, :, a] = p * vals
        return out

    jd = fine_joint_distribution(bob_joint(alice[0]), bob_joint(alice[1]))
    corr = np.zeros((2, 2, 2, 2))
    axes = {  # (x index, y index) -> JD axes to keep: a_x and b_y
        (0, 0): (0, 2), (0, 1): (0, 3), (1, 0): (1, 2), (1, 1): (1, 3),
    }
    for (ix, iy), keep in axes.items():
        drop = tuple(sorted(set(range(4)) - set(keep)))
        corr[ix, iy] = jd.sum(axis=drop)
    return {"joint_distribution": jd, "correlation_table": corr, "master_values": table.values}
