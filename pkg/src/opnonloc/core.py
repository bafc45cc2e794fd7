"""Convex-operational primitives: state spaces, states, effects, measurements, theories.

A theory is specified by a convex set of states embedded in R^d together with
the affine functionals (effects) that are allowed as measurement outcomes.
Two geometries are supported: finite polytopes given by their vertex list and
the 2-D unit disc (the real X-Z fragment of a qubit).  Non-convex theories
restrict the valid states to an explicit list on top of the embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .lp import polytope_contains

# Algebraic identities (normalization, effect sums) are checked to ALG_TOL;
# geometric membership and LP feasibility to GEOM_TOL.
ALG_TOL = 1e-12
GEOM_TOL = 1e-9

POLYTOPE = "polytope"
DISC = "disc"


def as_vector(coords: Iterable[float], dim: int | None = None) -> np.ndarray:
    """Coerce to a read-only 1-D float array with finite entries."""
    vec = np.array(coords, dtype=float).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise ValueError("vector entries must be finite")
    if dim is not None and vec.shape != (dim,):
        raise ValueError(f"expected vector of length {dim}, got {vec.shape[0]}")
    vec.setflags(write=False)
    return vec


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Set of normalized states, either a vertex-listed polytope or the unit disc."""

    dim: int
    vertices: np.ndarray  # shape (n_vertices, dim); empty for disc geometry
    geometry_kind: str = POLYTOPE
    convex_closure_allowed: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        verts = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if verts.size == 0:
            verts = verts.reshape(0, self.dim)
        if verts.shape[1] != self.dim:
            raise ValueError("every vertex must have length dim")
        if not np.all(np.isfinite(verts)):
            raise ValueError("vertex entries must be finite")
        if self.geometry_kind not in (POLYTOPE, DISC):
            raise ValueError(f"unknown geometry_kind {self.geometry_kind!r}")
        if self.geometry_kind == DISC and self.dim != 2:
            raise ValueError("disc geometry requires dim = 2")
        verts = verts.copy()
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    def contains(self, point: np.ndarray, tol: float = GEOM_TOL) -> bool:
        """Membership test: LP over vertices for polytopes, norm bound for the disc."""
        point = as_vector(point, self.dim)
        if self.geometry_kind == DISC:
            return float(np.linalg.norm(point)) <= 1.0 + tol
        return polytope_contains(self.vertices, point, tol=tol)

    def boundary_points(self, n: int, outer: bool = False) -> np.ndarray:
        """Regular n-gon on the disc boundary; circumscribed when outer=True.

        The circumscribed polygon contains the disc, so LP infeasibility over
        its vertices certifies infeasibility over the disc itself.
        """
        if self.geometry_kind != DISC:
            raise ValueError("boundary_points is defined for disc geometry only")
        radius = 1.0 / np.cos(np.pi / n) if outer else 1.0
        angles = 2.0 * np.pi * np.arange(n) / n
        return radius * np.column_stack([np.cos(angles), np.sin(angles)])

    def state(self, point: Iterable[float], weights: Sequence[tuple[int, float]] | None = None,
              tol: float = GEOM_TOL) -> "State":
        """Build a validated state of this space from coordinates."""
        st = State(as_vector(point, self.dim), None if weights is None else tuple(weights))
        self.check_state(st, tol=tol)
        return st

    def check_state(self, state: "State", tol: float = GEOM_TOL) -> None:
        """Raise unless the state lies in the space and its decomposition reconstructs it."""
        if state.point.shape != (self.dim,):
            raise ValueError("state dimension does not match space")
        if state.weights is not None:
            ws = np.array([w for _, w in state.weights], dtype=float)
            if np.any(ws < -ALG_TOL):
                raise ValueError("decomposition weights must be nonnegative")
            if abs(ws.sum() - 1.0) > ALG_TOL:
                raise ValueError("decomposition weights must sum to 1")
            recon = sum(w * self.vertices[i] for i, w in state.weights)
            if not np.allclose(recon, state.point, atol=tol, rtol=0.0):
                raise ValueError("decomposition does not reconstruct the state point")
        if not self.contains(state.point, tol=tol):
            raise ValueError("point lies outside the state space")


@dataclass(frozen=True, eq=False)
class State:
    """A point of a state space, optionally with a convex decomposition over vertices."""

    point: np.ndarray
    weights: tuple[tuple[int, float], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "point", as_vector(self.point))


@dataclass(frozen=True, eq=False)
class Effect:
    """Affine functional on states; value on point p is linear . p + offset."""

    linear: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "linear", as_vector(self.linear))
        object.__setattr__(self, "offset", float(self.offset))

    @staticmethod
    def unit(dim: int) -> "Effect":
        """The unit effect: value 1 on every state."""
        return Effect(np.zeros(dim), 1.0)

    def value_at(self, point: np.ndarray) -> float:
        return float(self.linear @ point) + self.offset

    def value_range(self, space: StateSpace) -> tuple[float, float]:
        """Exact min/max over the space (vertex extremes; analytic for the disc)."""
        if space.geometry_kind == DISC:
            swing = float(np.linalg.norm(self.linear))
            return self.offset - swing, self.offset + swing
        vals = space.vertices @ self.linear + self.offset
        return float(vals.min()), float(vals.max())

    def is_valid_on(self, space: StateSpace, tol: float = ALG_TOL) -> bool:
        """Probability range check: 0 <= value <= 1 over the whole space."""
        lo, hi = self.value_range(space)
        return lo >= -tol and hi <= 1.0 + tol


@dataclass(frozen=True, eq=False)
class Measurement:
    """Finite-outcome measurement: an ordered tuple of effects summing to the unit."""

    label: str
    effects: tuple[Effect, ...]

    def __post_init__(self):
        object.__setattr__(self, "effects", tuple(self.effects))
        if not self.effects:
            raise ValueError("measurement needs at least one outcome")

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    def check_on(self, space: StateSpace) -> None:
        """Raise unless all effects are valid and sum to the unit effect."""
        for eff in self.effects:
            if eff.linear.shape != (space.dim,):
                raise ValueError(f"effect dimension mismatch in measurement {self.label!r}")
            if not eff.is_valid_on(space):
                raise ValueError(f"effect out of [0,1] range in measurement {self.label!r}")
        total_linear = np.sum([eff.linear for eff in self.effects], axis=0)
        total_offset = sum(eff.offset for eff in self.effects)
        if np.max(np.abs(total_linear)) > ALG_TOL or abs(total_offset - 1.0) > ALG_TOL:
            raise ValueError(f"effects of {self.label!r} do not sum to the unit effect")


@dataclass(frozen=True, eq=False)
class Theory:
    """A named state space plus its allowed measurements.

    ``valid_states`` is set only for non-convex theories, where it replaces the
    convex hull as the collection of preparable states.
    """

    name: str
    space: StateSpace
    measurements: tuple[Measurement, ...]
    valid_states: tuple[State, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "measurements", tuple(self.measurements))
        for m in self.measurements:
            m.check_on(self.space)
        if not self.space.convex_closure_allowed and self.valid_states is None:
            raise ValueError("non-convex theory requires an explicit valid_states list")
        if self.valid_states is not None:
            object.__setattr__(self, "valid_states", tuple(self.valid_states))

    def measurement(self, label: str) -> Measurement:
        for m in self.measurements:
            if m.label == label:
                return m
        raise KeyError(f"theory {self.name!r} has no measurement {label!r}")

    def is_valid_state(self, state: State, tol: float = GEOM_TOL) -> bool:
        """State validity: space membership, restricted to valid_states when non-convex."""
        if self.valid_states is not None:
            return any(np.allclose(state.point, s.point, atol=tol, rtol=0.0)
                       for s in self.valid_states)
        if state.point.shape != (self.space.dim,):
            return False
        return self.space.contains(state.point, tol=tol)


def evaluate_effect(effect: Effect, state: State) -> float:
    """Outcome probability of an effect on a state, clamped only at roundoff scale."""
    if effect.linear.shape != state.point.shape:
        raise ValueError("effect and state dimensions do not match")
    value = effect.value_at(state.point)
    if value < -ALG_TOL or value > 1.0 + ALG_TOL:
        raise ValueError(f"effect value {value} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def measure_distribution(measurement: Measurement, state: State) -> np.ndarray:
    """Outcome distribution of a measurement on a state."""
    probs = np.array([evaluate_effect(eff, state) for eff in measurement.effects])
    if abs(probs.sum() - 1.0) > ALG_TOL * len(probs):
        raise ValueError(f"outcome probabilities of {measurement.label!r} do not sum to 1")
    return probs


def mix_states(weighted: Sequence[tuple[float, State]], theory: Theory | None = None) -> State:
    """Convex combination of states.

    In a non-convex theory the mixture must land (within tolerance) on one of
    the explicitly valid states; anything else is rejected rather than
    silently convexified.
    """
    if not weighted:
        raise ValueError("empty mixture")
    weights = np.array([w for w, _ in weighted], dtype=float)
    if np.any(weights < -ALG_TOL):
        raise ValueError("mixture weights must be nonnegative")
    if abs(weights.sum() - 1.0) > ALG_TOL:
        raise ValueError("mixture weights must sum to 1")
    point = np.sum([w * s.point for w, s in weighted], axis=0)
    mixed = State(point)
    if theory is not None and not theory.space.convex_closure_allowed:
        for valid in theory.valid_states or ():
            if np.allclose(valid.point, point, atol=GEOM_TOL, rtol=0.0):
                return valid
        raise ValueError(f"mixture is not a valid state of non-convex theory {theory.name!r}")
    return mixed


# --- JSON round-tripping (vertices as arrays, effects as {linear, offset}) ---

def space_to_json(space: StateSpace) -> dict:
    return {
        "dim": space.dim,
        "vertices": space.vertices.tolist(),
        "geometry_kind": space.geometry_kind,
        "convex_closure_allowed": space.convex_closure_allowed,
    }


def space_from_json(data: dict) -> StateSpace:
    return StateSpace(
        dim=int(data["dim"]),
        vertices=np.asarray(data["vertices"], dtype=float).reshape(-1, int(data["dim"])),
        geometry_kind=data.get("geometry_kind", POLYTOPE),
        convex_closure_allowed=bool(data.get("convex_closure_allowed", True)),
    )


def state_to_json(state: State) -> dict:
    out: dict = {"point": state.point.tolist()}
    if state.weights is not None:
        out["weights"] = [[int(i), float(w)] for i, w in state.weights]
    return out


def state_from_json(data: dict) -> State:
    weights = data.get("weights")
    return State(
        np.asarray(data["point"], dtype=float),
        None if weights is None else tuple((int(i), float(w)) for i, w in weights),
    )


def effect_to_json(effect: Effect) -> dict:
    return {"linear": effect.linear.tolist(), "offset": effect.offset}


def effect_from_json(data: dict) -> Effect:
    return Effect(np.asarray(data["linear"], dtype=float), float(data["offset"]))


def measurement_to_json(measurement: Measurement) -> dict:
    return {"label": measurement.label,
            "effects": [effect_to_json(e) for e in measurement.effects]}


def measurement_from_json(data: dict) -> Measurement:
    return Measurement(data["label"], tuple(effect_from_json(e) for e in data["effects"]))


def theory_to_json(theory: Theory) -> dict:
    out = {
        "name": theory.name,
        "space": space_to_json(theory.space),
        "measurements": [measurement_to_json(m) for m in theory.measurements],
    }
    if theory.valid_states is not None:
        out["valid_states"] = [state_to_json(s) for s in theory.valid_states]
    return out


def theory_from_json(data: dict) -> Theory:
    valid = data.get("valid_states")
    return Theory(
        name=data["name"],
        space=space_from_json(data["space"]),
        measurements=tuple(measurement_from_json(m) for m in data["measurements"]),
        valid_states=None if valid is None else tuple(state_from_json(s) for s in valid),
    )
