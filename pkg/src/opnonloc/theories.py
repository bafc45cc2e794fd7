"""Constructors for the concrete theories and bipartite states under study.

Single systems: the classical bit (1-simplex), the rebit (X-Z fragment of a
qubit on the unit disc), Spekkens' toy bit (non-convex, six pure states), and
gdits/gbits (hypercube-like fiducial state spaces).  Bipartite objects: the
quantum singlet restricted to the X-Z plane, the PR box in both correlation
and steering form, the perfectly correlated Spekkens pair, plus product and
classically correlated states that serve as unsteerable baselines.

Coordinate conventions:
  * classical bit: 1-D, coordinate = P(outcome 1).
  * gdit(d, k): d blocks of k-1 fiducial probabilities P(outcome j | fiducial i).
  * rebit: unit disc, pure state at angle t is (cos t, sin t); the measurement
    at angle t has outcome-+ probability (1 + cos(t - s))/2 on the state at s.
  * Spekkens bit: (P(1v2), P(1v3), P(1v4)) over the four ontic states 1..4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .core import (
    ALG_TOL,
    DISC,
    GEOM_TOL,
    Effect,
    Measurement,
    State,
    StateSpace,
    Theory,
    evaluate_effect,
    measure_distribution,
)

ConditionalRule = tuple[tuple[float, State], ...]


# --------------------------------------------------------------------------
# Single-system theories
# --------------------------------------------------------------------------

def make_classical_bit() -> Theory:
    """Classical bit: two vertices on a segment, both observables read the bit."""
    space = StateSpace(dim=1, vertices=np.array([[0.0], [1.0]]))
    read_bit = (Effect(np.array([-1.0]), 1.0), Effect(np.array([1.0]), 0.0))
    measurements = (Measurement("X", read_bit), Measurement("Z", read_bit))
    return Theory("classical", space, measurements)


def make_gdit(d: int, k: int, name: str | None = None,
              labels: tuple[str, ...] | None = None) -> Theory:
    """Generalized dit: d fiducial measurements with k outcomes each.

    The state space is the convex hull of the k^d deterministic assignments,
    embedded in dimension d(k-1) by the fiducial outcome probabilities.
    """
    if d < 1 or k < 2:
        raise ValueError("gdit requires d >= 1 inputs and k >= 2 outcomes")
    dim = d * (k - 1)
    vertices = []
    for assignment in itertools.product(range(k), repeat=d):
        v = np.zeros(dim)
        for i, outcome in enumerate(assignment):
            if outcome < k - 1:
                v[i * (k - 1) + outcome] = 1.0
        vertices.append(v)
    if labels is None:
        labels = tuple(f"F{i}" for i in range(d))
    measurements = []
    for i, label in enumerate(labels):
        effects = []
        block = np.zeros(dim)
        for j in range(k - 1):
            linear = np.zeros(dim)
            linear[i * (k - 1) + j] = 1.0
            block += linear
            effects.append(Effect(linear, 0.0))
        effects.append(Effect(-block, 1.0))
        measurements.append(Measurement(label, tuple(effects)))
    return Theory(name or f"gdit({d},{k})", StateSpace(dim, np.array(vertices)),
                  tuple(measurements))


def make_gbit() -> Theory:
    """The d=2, k=2 gdit (boxworld single system) with fiducials X and Z."""
    return make_gdit(2, 2, name="gbit", labels=("X", "Z"))


def gbit_vertex(x_outcome: int, z_outcome: int) -> State:
    """Pure gbit state with deterministic fiducial outcomes (x_outcome, z_outcome)."""
    return State(np.array([1.0 - x_outcome, 1.0 - z_outcome]))


def rebit_measurement(theta: float, label: str | None = None) -> Measurement:
    """Dichotomic rebit observable along angle theta in the X-Z plane."""
    direction = np.array([np.cos(theta), np.sin(theta)])
    effects = (Effect(direction / 2.0, 0.5), Effect(-direction / 2.0, 0.5))
    return Measurement(label if label is not None else f"deg:{np.degrees(theta):g}", effects)


def rebit_state(theta: float, radius: float = 1.0) -> State:
    """Rebit state at polar angle theta (pure when radius is 1)."""
    if not 0.0 <= radius <= 1.0 + ALG_TOL:
        raise ValueError("radius must lie in [0, 1]")
    return State(radius * np.array([np.cos(theta), np.sin(theta)]))


def make_rebit() -> Theory:
    """Real X-Z fragment of a qubit: unit-disc state space with X, Z and diagonals."""
    space = StateSpace(dim=2, vertices=np.empty((0, 2)), geometry_kind=DISC)
    measurements = (
        rebit_measurement(0.0, "X"),
        rebit_measurement(np.pi / 2.0, "Z"),
        rebit_measurement(np.pi / 4.0, "D+"),
        rebit_measurement(-np.pi / 4.0, "D-"),
    )
    return Theory("rebit", space, measurements)


_SPEKKENS_SUPPORTS: dict[str, frozenset[int]] = {
    "x+": frozenset({1, 2}), "x-": frozenset({3, 4}),
    "y+": frozenset({1, 3}), "y-": frozenset({2, 4}),
    "z+": frozenset({1, 4}), "z-": frozenset({2, 3}),
    "mixed": frozenset({1, 2, 3, 4}),
}
_SPEKKENS_FIDUCIALS = (frozenset({1, 2}), frozenset({1, 3}), frozenset({1, 4}))


def spekkens_state(name: str) -> State:
    """Epistemic state of the toy bit by name: x+/x-/y+/y-/z+/z-/mixed."""
    support = _SPEKKENS_SUPPORTS.get(name)
    if support is None:
        raise KeyError(f"unknown Spekkens state {name!r}")
    point = np.array([len(support & fid) / len(support) for fid in _SPEKKENS_FIDUCIALS])
    return State(point)


def make_spekkens() -> Theory:
    """Spekkens' toy bit: six pure states, three mutually unbiased observables.

    The theory is non-convex; only the six pure states and the fully mixed
    state are valid preparations, so the valid-state list is explicit.
    """
    pure = tuple(spekkens_state(n) for n in ("x+", "x-", "y+", "y-", "z+", "z-"))
    space = StateSpace(
        dim=3,
        vertices=np.array([s.point for s in pure]),
        convex_closure_allowed=False,
    )
    selectors = {"X": 0, "Y": 1, "Z": 2}
    measurements = []
    for label, axis in selectors.items():
        linear = np.zeros(3)
        linear[axis] = 1.0
        measurements.append(Measurement(label, (Effect(linear, 0.0), Effect(-linear, 1.0))))
    valid = pure + (spekkens_state("mixed"),)
    return Theory("spekkens", space, tuple(measurements), valid_states=valid)


THEORIES: dict[str, Callable[[], Theory]] = {
    "classical": make_classical_bit,
    "rebit": make_rebit,
    "spekkens": make_spekkens,
    "gbit": make_gbit,
}


def resolve_measurement(theory: Theory, label: str) -> Measurement:
    """Measurement lookup by label, with "deg:<angle>" accepted for the rebit."""
    if label.startswith("deg:") and theory.space.geometry_kind == DISC:
        return rebit_measurement(np.radians(float(label.split(":", 1)[1])), label)
    return theory.measurement(label)


# --------------------------------------------------------------------------
# Bipartite states
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Bipartite preparation seen through Alice's measurement choices.

    For each Alice setting x the conditional rule lists, per outcome a, the
    probability p(a|x) and Bob's conditioned (normalized) state.  Settings not
    tabulated in ``entries`` may be served by ``setting_resolver`` (used for
    the singlet's continuum of angles).
    """

    name: str
    bob_theory: Theory
    alice_settings: tuple[str, ...]
    entries: Mapping[str, ConditionalRule]
    setting_resolver: Callable[[str], ConditionalRule] | None = field(default=None)
    validate: bool = field(default=True)

    def __post_init__(self):
        if self.validate:
            reduced = None
            for x in self.alice_settings:
                rule = self.conditioned(x)
                total = sum(p for p, _ in rule)
                if abs(total - 1.0) > ALG_TOL:
                    raise ValueError(f"outcome probabilities for setting {x!r} sum to {total}")
                red = sum(p * s.point for p, s in rule)
                if reduced is None:
                    reduced = red
                elif not np.allclose(red, reduced, atol=GEOM_TOL, rtol=0.0):
                    raise ValueError(f"reduced Bob state differs for setting {x!r}: signaling")

    def conditioned(self, x: str) -> ConditionalRule:
        """Alice setting label -> tuple over outcomes of (p(a|x), Bob state)."""
        if x in self.entries:
            return self.entries[x]
        if self.setting_resolver is not None:
            return self.setting_resolver(x)
        raise KeyError(f"bipartite state {self.name!r} has no Alice setting {x!r}")

    def reduced_bob_state(self) -> State:
        rule = self.conditioned(self.alice_settings[0])
        return State(sum(p * s.point for p, s in rule))


def _singlet_angle(label: str) -> float:
    named = {"X": 0.0, "Z": np.pi / 2.0, "D+": np.pi / 4.0, "D-": -np.pi / 4.0}
    if label in named:
        return named[label]
    if label.startswith("deg:"):
        return np.radians(float(label.split(":", 1)[1]))
    raise KeyError(f"cannot interpret singlet setting {label!r}")


def _singlet_rule(label: str) -> ConditionalRule:
    theta = _singlet_angle(label)
    # Perfect anticorrelation: outcome + steers Bob to the opposite pole.
    return ((0.5, rebit_state(theta + np.pi)), (0.5, rebit_state(theta)))


def make_singlet() -> BipartiteState:
    """Two-qubit singlet as seen in the X-Z plane: uniform outcomes, antipodal steering."""
    labels = ("X", "Z", "D+", "D-")
    return BipartiteState(
        name="singlet",
        bob_theory=make_rebit(),
        alice_settings=labels,
        entries={lab: _singlet_rule(lab) for lab in labels},
        setting_resolver=_singlet_rule,
    )


def make_pr_bipartite() -> BipartiteState:
    """PR box in steering form: Alice's outcome picks the gbit vertex enforcing a+b = xy.

    Alice setting "X" is input x=0 and "Z" is x=1; Bob's fiducials X, Z play
    y=0, y=1.  Conditioned on (x, a), Bob holds the pure gbit returning
    b = a XOR x.y deterministically for both of his fiducials.
    """
    entries: dict[str, ConditionalRule] = {}
    for x_bit, label in ((0, "X"), (1, "Z")):
        rule = [(0.5, gbit_vertex(a, a ^ x_bit)) for a in (0, 1)]
        entries[label] = tuple(rule)
    return BipartiteState(
        name="pr",
        bob_theory=make_gbit(),
        alice_settings=("X", "Z"),
        entries=entries,
    )


def make_spekkens_entangled() -> BipartiteState:
    """Identity-permutation entangled pair of toy bits: perfect eigenstate steering."""
    eigen = {"X": ("x+", "x-"), "Y": ("y+", "y-"), "Z": ("z+", "z-")}
    entries = {
        label: tuple((0.5, spekkens_state(name)) for name in names)
        for label, names in eigen.items()
    }
    return BipartiteState(
        name="spekkens-ent",
        bob_theory=make_spekkens(),
        alice_settings=("X", "Y", "Z"),
        entries=entries,
    )


def make_product(alice_state: State, bob_state: State, theory: Theory) -> BipartiteState:
    """Product preparation: Bob's conditioned state never depends on (x, a)."""
    if not theory.is_valid_state(alice_state) or not theory.is_valid_state(bob_state):
        raise ValueError("product factors must be valid states of the theory")

    def rule(label: str) -> ConditionalRule:
        probs = measure_distribution(resolve_measurement(theory, label), alice_state)
        return tuple((float(p), bob_state) for p in probs)

    labels = tuple(m.label for m in theory.measurements)
    return BipartiteState(
        name="product",
        bob_theory=theory,
        alice_settings=labels,
        entries={lab: rule(lab) for lab in labels},
        setting_resolver=rule if theory.space.geometry_kind == DISC else None,
    )


def make_classical_correlated() -> BipartiteState:
    """Uniformly correlated pair of classical bits (the classical steering baseline)."""
    theory = make_classical_bit()
    vertex = (State(np.array([0.0])), State(np.array([1.0])))
    rule = tuple((0.5, vertex[a]) for a in (0, 1))
    return BipartiteState(
        name="classical-corr",
        bob_theory=theory,
        alice_settings=("X", "Z"),
        entries={"X": rule, "Z": rule},
    )


def default_product_state() -> BipartiteState:
    """Product rebit pair with both factors at 45 degrees (the uncertainty maximizer)."""
    optimal = rebit_state(np.pi / 4.0)
    return make_product(optimal, optimal, make_rebit())


BIPARTITE_STATES: dict[str, Callable[[], BipartiteState]] = {
    "singlet": make_singlet,
    "pr": make_pr_bipartite,
    "spekkens-ent": make_spekkens_entangled,
    "product": default_product_state,
    "classical-corr": make_classical_correlated,
}

# Theory each named bipartite state lives in (used by the CLI defaults).
STATE_THEORY: dict[str, str] = {
    "singlet": "rebit",
    "pr": "gbit",
    "spekkens-ent": "spekkens",
    "product": "rebit",
    "classical-corr": "classical",
}


# --------------------------------------------------------------------------
# Correlations
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Correlation:
    """Finite conditional probability table P(a, b | x, y), indexed [x, y, a, b]."""

    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        if table.ndim != 4:
            raise ValueError("correlation table must have shape (nX, nY, nA, nB)")
        if np.any(table < -ALG_TOL):
            raise ValueError("correlation table has negative entries")
        sums = table.sum(axis=(2, 3))
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValueError("each P(.,.|x,y) block must sum to 1")
        table = table.copy()
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.table.shape

    def to_json(self) -> list:
        return self.table.tolist()

    @staticmethod
    def from_json(data: list) -> "Correlation":
        return Correlation(np.asarray(data, dtype=float))


def make_pr_box() -> Correlation:
    """The PR box: P(a, b | x, y) = 1/2 when a XOR b = x.y, else 0."""
    table = np.zeros((2, 2, 2, 2))
    for x, y, a, b in itertools.product(range(2), repeat=4):
        if (a ^ b) == (x & y):
            table[x, y, a, b] = 0.5
    return Correlation(table)


def correlation_from(
    bipartite: BipartiteState,
    alice_settings: tuple[str, ...],
    bob_settings: tuple[str, ...],
) -> Correlation:
    """Joint table P(a, b | x, y) = p(a|x) P(b | y, Bob's conditioned state)."""
    rules = [bipartite.conditioned(x) for x in alice_settings]
    bob_meas = [resolve_measurement(bipartite.bob_theory, y) for y in bob_settings]
    n_a = max(len(r) for r in rules)
    n_b = max(m.n_outcomes for m in bob_meas)
    table = np.zeros((len(alice_settings), len(bob_settings), n_a, n_b))
    for ix, rule in enumerate(rules):
        for iy, meas in enumerate(bob_meas):
            for a, (p, omega) in enumerate(rule):
                if p == 0.0:
                    continue
                table[ix, iy, a, : meas.n_outcomes] = p * measure_distribution(meas, omega)
    return Correlation(table)
