"""Independent reference implementations used to freeze expected test values.

Everything here recomputes physics through a different route than the library:
explicit 2x2/4x4 matrix algebra for the qubit fragment, ontic-support counting
for the toy bit, direct loops for correlation tables, and a grid search over
hidden-state mixtures for the LHS question.  None of it imports library code
beyond plain data, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools

import numpy as np

I2 = np.eye(2)
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def qubit_density(phi: float, radius: float = 1.0) -> np.ndarray:
    """X-Z plane qubit state as an explicit density matrix."""
    return 0.5 * (I2 + radius * (np.cos(phi) * SX + np.sin(phi) * SZ))


def qubit_projector(theta: float, sign: int) -> np.ndarray:
    """Outcome projector of the observable at angle theta in the X-Z plane."""
    return 0.5 * (I2 + sign * (np.cos(theta) * SX + np.sin(theta) * SZ))


def born_prob(theta_meas: float, phi_state: float, sign: int = +1,
              radius: float = 1.0) -> float:
    """tr(rho E) through matrix arithmetic."""
    return float(np.trace(qubit_density(phi_state, radius) @ qubit_projector(theta_meas, sign)).real)


def singlet_density() -> np.ndarray:
    psi = np.zeros(4)
    psi[1] = 1.0 / np.sqrt(2.0)
    psi[2] = -1.0 / np.sqrt(2.0)
    return np.outer(psi, psi)


def singlet_joint_prob(theta_a: float, sign_a: int, theta_b: float, sign_b: int) -> float:
    """P(a, b | settings) for the singlet from the 4x4 density matrix."""
    op = np.kron(qubit_projector(theta_a, sign_a), qubit_projector(theta_b, sign_b))
    return float(np.trace(singlet_density() @ op).real)


def singlet_correlator(theta_a: float, theta_b: float) -> float:
    total = 0.0
    for sa in (+1, -1):
        for sb in (+1, -1):
            total += sa * sb * singlet_joint_prob(theta_a, sa, theta_b, sb)
    return total


def singlet_conditioned_bloch(theta_a: float, sign_a: int) -> tuple[float, tuple[float, float]]:
    """Alice's outcome probability and Bob's conditioned (x, z) Bloch components."""
    rho = singlet_density()
    pa_op = np.kron(qubit_projector(theta_a, sign_a), I2)
    sub = pa_op @ rho @ pa_op
    p = float(np.trace(sub).real)
    rb = (sub / p).reshape(2, 2, 2, 2).trace(axis1=0, axis2=2)
    return p, (float(np.trace(rb @ SX).real), float(np.trace(rb @ SZ).real))


# --- Spekkens toy bit by ontic-support counting -----------------------------

SPEKKENS_SUPPORT = {
    "x+": frozenset({1, 2}), "x-": frozenset({3, 4}),
    "y+": frozenset({1, 3}), "y-": frozenset({2, 4}),
    "z+": frozenset({1, 4}), "z-": frozenset({2, 3}),
    "mixed": frozenset({1, 2, 3, 4}),
}
SPEKKENS_MEAS_SUPPORT = {
    "X": (frozenset({1, 2}), frozenset({3, 4})),
    "Y": (frozenset({1, 3}), frozenset({2, 4})),
    "Z": (frozenset({1, 4}), frozenset({2, 3})),
}


def spekkens_distribution(meas: str, state: str) -> tuple[float, float]:
    """Outcome distribution by counting ontic states compatible with the preparation."""
    support = SPEKKENS_SUPPORT[state]
    return tuple(len(support & out) / len(support) for out in SPEKKENS_MEAS_SUPPORT[meas])


# --- Correlation-table arithmetic by direct loops ---------------------------

def chsh_by_loop(table: np.ndarray) -> float:
    """CHSH combination computed entry by entry (outcome 0 -> +1, 1 -> -1)."""
    e = np.zeros((2, 2))
    for x, y in itertools.product(range(2), repeat=2):
        for a, b in itertools.product(range(2), repeat=2):
            e[x, y] += (1 if a == 0 else -1) * (1 if b == 0 else -1) * table[x, y, a, b]
    return abs(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1])


def chsh_all_liftings(table: np.ndarray) -> float:
    """Max |CHSH| over the four inequivalent sign placements."""
    e = np.zeros((2, 2))
    for x, y in itertools.product(range(2), repeat=2):
        for a, b in itertools.product(range(2), repeat=2):
            e[x, y] += (1 if a == 0 else -1) * (1 if b == 0 else -1) * table[x, y, a, b]
    best = 0.0
    for sx, sy in itertools.product(range(2), repeat=2):
        signs = np.ones((2, 2))
        signs[sx, sy] = -1.0
        best = max(best, abs(float(np.sum(signs * e))))
    return best


# --- Brute-force LHS search --------------------------------------------------

def brute_force_lhs(
    weights: np.ndarray,
    points: np.ndarray,
    vertices: np.ndarray,
    outcome_counts: tuple[int, ...],
    steps: int,
) -> tuple[bool, float]:
    """Grid search for a hidden-state model of a 2-setting assemblage.

    Every LHS model is a mixture of atoms (deterministic strategy, pure hidden
    state); the search runs over atom weights quantized to multiples of
    1/steps and reports whether any mixture reproduces the assemblage within
    half a grid step.

    weights: array [setting, outcome] of p(a|x); points: [setting, outcome, dim]
    of the conditioned state coordinates.
    """
    strategies = list(itertools.product(*[range(c) for c in outcome_counts]))
    n_settings = len(outcome_counts)
    dim = vertices.shape[1]
    atoms = []
    for lam in strategies:
        for v in vertices:
            target = []
            for x in range(n_settings):
                for a in range(outcome_counts[x]):
                    hit = 1.0 if lam[x] == a else 0.0
                    target.append(hit)
                    target.extend(hit * v)
            atoms.append(target)
    atoms = np.asarray(atoms)

    goal = []
    for x in range(n_settings):
        for a in range(outcome_counts[x]):
            goal.append(weights[x, a])
            goal.extend(weights[x, a] * points[x, a])
    goal = np.asarray(goal)

    n_atoms = atoms.shape[0]
    combos = _compositions(steps, n_atoms)
    mix = combos / steps
    residuals = np.max(np.abs(mix @ atoms - goal), axis=1)
    best = float(residuals.min())
    return best <= 0.5 / steps + 1e-9, best


def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of the given length summing to total."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], total, parts)
    return np.asarray(out, dtype=float)
