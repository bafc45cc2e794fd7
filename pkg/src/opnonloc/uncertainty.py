"""Single-system certainty functionals and the theory-level uncertainty bound.

For a measurement y and state w, q(y, w) is the largest outcome probability.
The bound of interest is the maximum of q(y0, w) + q(y1, w) over all valid
states; a value of 2 means some state is simultaneously certain for both
observables, anything smaller certifies an irreducible trade-off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DISC, Measurement, State, Theory, measure_distribution
from .theories import resolve_measurement

# Boundary scan resolution for disc state spaces; two zoom rounds push the
# value error far below the 1e-9 target.
_GRID_POINTS = 100_000
_ZOOM_POINTS = 2_001
_ZOOM_ROUNDS = 2


@dataclass(frozen=True, eq=False)
class UncertaintyBound:
    """Tight bound on the certainty sum, with a state attaining it."""

    upsilon_star: float
    maximizer: State
    settings: tuple[Measurement, Measurement]


def max_outcome_prob(y: Measurement, omega: State) -> float:
    """q(y, w): the probability of the likeliest outcome."""
    return float(np.max(measure_distribution(y, omega)))


def certainty_sum(omega: State, y0: Measurement, y1: Measurement) -> float:
    """q(y0, w) + q(y1, w); lies in [1, 2] for dichotomic pairs."""
    return max_outcome_prob(y0, omega) + max_outcome_prob(y1, omega)


def _sum_on_points(points: np.ndarray, measurements: tuple[Measurement, ...]) -> np.ndarray:
    """Vectorized certainty sum over rows of ``points``."""
    total = np.zeros(points.shape[0])
    for m in measurements:
        values = np.column_stack([points @ e.linear + e.offset for e in m.effects])
        total += values.max(axis=1)
    return total


def _maximize_disc(measurements: tuple[Measurement, ...]) -> tuple[float, State]:
    # Certainty sums are convex, so the maximum sits on the boundary circle.
    lo, hi, n = 0.0, 2.0 * np.pi, _GRID_POINTS
    best_angle = 0.0
    for _ in range(1 + _ZOOM_ROUNDS):
        angles = np.linspace(lo, hi, n, endpoint=False) if hi - lo >= 2 * np.pi else \
            np.linspace(lo, hi, n)
        points = np.column_stack([np.cos(angles), np.sin(angles)])
        sums = _sum_on_points(points, measurements)
        best = int(np.argmax(sums))  # argmax takes the first (smallest-angle) tie
        best_angle = float(angles[best])
        step = angles[1] - angles[0]
        lo, hi, n = best_angle - step, best_angle + step, _ZOOM_POINTS
    point = np.array([np.cos(best_angle), np.sin(best_angle)])
    value = float(_sum_on_points(point[None, :], measurements)[0])
    return value, State(point)


def _maximize_over_list(states: tuple[State, ...],
                        measurements: tuple[Measurement, ...]) -> tuple[float, State]:
    points = np.vstack([s.point for s in states])
    sums = _sum_on_points(points, measurements)
    best = int(np.argmax(sums))  # first index wins ties, keeping results deterministic
    return float(sums[best]), states[best]


def _maximize(theory: Theory, measurements: tuple[Measurement, ...]) -> tuple[float, State]:
    if theory.valid_states is not None:
        return _maximize_over_list(theory.valid_states, measurements)
    if theory.space.geometry_kind == DISC:
        return _maximize_disc(measurements)
    if theory.space.vertices.shape[0] == 0:
        raise ValueError(f"theory {theory.name!r} has no states to optimize over")
    vertex_states = tuple(State(v) for v in theory.space.vertices)
    return _maximize_over_list(vertex_states, measurements)


def upsilon_star(theory: Theory, y0: Measurement | str, y1: Measurement | str) -> UncertaintyBound:
    """Maximum certainty sum over the theory's valid states.

    Polytopes are scanned at their vertices (the sum is convex, so extremes
    are attained there); the disc is scanned over its boundary angle; a
    non-convex theory is scanned over its explicit valid-state list.
    """
    m0 = resolve_measurement(theory, y0) if isinstance(y0, str) else y0
    m1 = resolve_measurement(theory, y1) if isinstance(y1, str) else y1
    value, maximizer = _maximize(theory, (m0, m1))
    return UncertaintyBound(value, maximizer, (m0, m1))


def max_single_setting(theory: Theory, y: Measurement | str) -> tuple[State, float]:
    """State maximizing q(y, w) and the attained value (1 when an eigenstate exists)."""
    m = resolve_measurement(theory, y) if isinstance(y, str) else y
    value, state = _maximize(theory, (m,))
    return state, value
