"""Assemblages, the conditioned certainty test, and local-hidden-state feasibility.

An assemblage collects Bob's conditioned states, weighted by the probability
of Alice's outcome, for each of her settings.  Remote disturbance is certified
operationally when the certainty sum conditioned on Alice's predictions beats
the single-system bound; a local-hidden-state (LHS) model, searched for by
linear programming over deterministic response strategies, explains the
assemblage classically whenever one exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import (
    ALG_TOL,
    DISC,
    GEOM_TOL,
    Measurement,
    State,
    StateSpace,
    Theory,
    space_from_json,
    space_to_json,
    state_from_json,
    state_to_json,
)
from .lp import solve_feasibility
from .theories import BipartiteState, resolve_measurement
from .uncertainty import max_outcome_prob, upsilon_star

# Polygon order used to sandwich the disc in LP feasibility questions.
DISC_POLYGON_VERTICES = 720


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Map (Alice setting, Alice outcome) -> (weight p(a|x), Bob state)."""

    settings: tuple[str, ...]
    entries: Mapping[tuple[str, int], tuple[float, State]]
    validate: bool = field(default=True)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))
        if self.validate:
            reduced = None
            for x in self.settings:
                rule = self.outcomes(x)
                if not rule:
                    raise ValueError(f"assemblage has no entries for setting {x!r}")
                total = sum(w for w, _ in rule)
                if abs(total - 1.0) > ALG_TOL * max(1, len(rule)):
                    raise ValueError(f"weights for setting {x!r} sum to {total}")
                red = sum(w * s.point for w, s in rule)
                if reduced is None:
                    reduced = red
                elif not np.allclose(red, reduced, atol=GEOM_TOL, rtol=0.0):
                    raise ValueError(f"reduced state differs for setting {x!r}: signaling")

    def outcomes(self, x: str) -> tuple[tuple[float, State], ...]:
        out = []
        a = 0
        while (x, a) in self.entries:
            out.append(self.entries[(x, a)])
            a += 1
        return tuple(out)

    def n_outcomes(self, x: str) -> int:
        return len(self.outcomes(x))

    def reduced_state(self) -> State:
        rule = self.outcomes(self.settings[0])
        return State(sum(w * s.point for w, s in rule))


@dataclass(frozen=True)
class NonlocalityVerdict:
    """Outcome of the conditioned-certainty test against the single-system bound."""

    lhs: float
    bound: float
    violated: bool
    margin: float


@dataclass(frozen=True, eq=False)
class LhsFeasibilityReport:
    """Result of the LHS linear program.

    ``certified`` is False only in the disc boundary case where the model was
    found on the circumscribed polygon but not on the inscribed one.
    """

    feasible: bool
    certified: bool
    approximation: str
    n_strategies: int
    model: dict[tuple[int, ...], tuple[float, State]] | None = None
    max_residual: float = 0.0


def assemblage_from(state: BipartiteState, alice_settings: Sequence[str]) -> Assemblage:
    """Extract the assemblage Alice can steer to with the given settings."""
    entries: dict[tuple[str, int], tuple[float, State]] = {}
    for x in alice_settings:
        for a, (p, omega) in enumerate(state.conditioned(x)):
            entries[(x, a)] = (float(p), omega)
    return Assemblage(tuple(alice_settings), entries)


def _resolve(bob_settings: Sequence[Measurement | str], theory: Theory | None) -> list[Measurement]:
    resolved = []
    for y in bob_settings:
        if isinstance(y, str):
            if theory is None:
                raise ValueError("label-based bob_settings require a theory to resolve them")
            resolved.append(resolve_measurement(theory, y))
        else:
            resolved.append(y)
    return resolved


def conditioned_certainty_sum(
    asm: Assemblage,
    pairing: Mapping[str, str],
    bob_settings: Sequence[Measurement | str],
    theory: Theory | None = None,
) -> float:
    """Sum over Bob's settings of his certainty conditioned on Alice's outcome.

    Each Bob setting y is paired with the Alice setting pairing[y]; the term is
    sum_a p(a|x) q(y, Bob's state given (x, a)).
    """
    measurements = _resolve(bob_settings, theory)
    labels = [y if isinstance(y, str) else y.label for y in bob_settings]
    total = 0.0
    for label, meas in zip(labels, measurements):
        if label not in pairing:
            raise KeyError(f"pairing does not cover Bob setting {label!r}")
        x = pairing[label]
        total += sum(w * max_outcome_prob(meas, omega) for w, omega in asm.outcomes(x))
    return total


def operational_nonlocality_test(
    state: BipartiteState,
    pairing: Mapping[str, str] | None,
    bob_settings: Sequence[str],
    theory: Theory | None = None,
) -> NonlocalityVerdict:
    """Conditioned certainty sum versus the single-system bound of Bob's theory.

    ``pairing`` defaults to matched labels (Bob's y paired with Alice's x of
    the same name).
    """
    theory = theory or state.bob_theory
    if pairing is None:
        pairing = {y: y for y in bob_settings}
    asm = assemblage_from(state, tuple(dict.fromkeys(pairing[y] for y in bob_settings)))
    lhs = conditioned_certainty_sum(asm, pairing, bob_settings, theory)
    bound = upsilon_star(theory, bob_settings[0], bob_settings[1]).upsilon_star
    violated = lhs > bound + GEOM_TOL
    return NonlocalityVerdict(lhs=lhs, bound=bound, violated=violated, margin=lhs - bound)


def _lp_vertices(space: StateSpace, outer: bool) -> np.ndarray:
    if space.geometry_kind == DISC:
        return space.boundary_points(DISC_POLYGON_VERTICES, outer=outer)
    return np.asarray(space.vertices, dtype=float)


def _lhs_lp(asm: Assemblage, vertices: np.ndarray) -> tuple[bool, np.ndarray | None, list]:
    """Feasibility LP over deterministic response strategies with states in cone(vertices)."""
    settings = asm.settings
    outcome_counts = [asm.n_outcomes(x) for x in settings]
    strategies = list(itertools.product(*[range(c) for c in outcome_counts]))
    n_verts, dim = vertices.shape
    n_strat = len(strategies)
    n_vars = n_strat * n_verts

    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for ix, x in enumerate(settings):
        for a, (weight, omega) in enumerate(asm.outcomes(x)):
            mask = np.array([1.0 if lam[ix] == a else 0.0 for lam in strategies])
            # Vector part: sum over matching strategies of V^T c equals the
            # subnormalized conditioned state.
            for coord in range(dim):
                row = np.zeros(n_vars)
                for s in range(n_strat):
                    if mask[s]:
                        row[s * n_verts:(s + 1) * n_verts] = vertices[:, coord]
                rows.append(row)
                rhs.append(weight * float(omega.point[coord]))
            # Mass part: total weight routed through matching strategies.
            row = np.zeros(n_vars)
            for s in range(n_strat):
                if mask[s]:
                    row[s * n_verts:(s + 1) * n_verts] = 1.0
            rows.append(row)
            rhs.append(weight)
    feasible, x_opt = solve_feasibility(np.array(rows), np.array(rhs), n_vars)
    return feasible, x_opt, strategies


def _decode_model(x_opt: np.ndarray, strategies: list, vertices: np.ndarray,
                  ) -> dict[tuple[int, ...], tuple[float, State]]:
    n_verts = vertices.shape[0]
    model = {}
    for s, lam in enumerate(strategies):
        coeff = x_opt[s * n_verts:(s + 1) * n_verts]
        mass = float(coeff.sum())
        if mass > 1e-12:
            model[tuple(lam)] = (mass, State(coeff @ vertices / mass))
    return model


def _model_residual(asm: Assemblage, model: dict) -> float:
    worst = 0.0
    for ix, x in enumerate(asm.settings):
        for a, (weight, omega) in enumerate(asm.outcomes(x)):
            vec = np.zeros_like(omega.point)
            mass = 0.0
            for lam, (m, sigma) in model.items():
                if lam[ix] == a:
                    vec = vec + m * sigma.point
                    mass += m
            worst = max(worst, float(np.max(np.abs(vec - weight * omega.point))), abs(mass - weight))
    return worst


def lhs_model_feasible(asm: Assemblage, bob_space: StateSpace) -> LhsFeasibilityReport:
    """Search for a local-hidden-state model of the assemblage by LP.

    Hidden variables are reduced to deterministic response strategies (one
    outcome per setting), which is convexly equivalent to arbitrary response
    distributions.  Disc spaces are sandwiched between inscribed and
    circumscribed regular polygons: infeasibility on the circumscribed polygon
    rules out a disc model outright, while a model on the inscribed polygon is
    a genuine disc model.
    """
    if bob_space.geometry_kind != DISC:
        vertices = _lp_vertices(bob_space, outer=False)
        feasible, x_opt, strategies = _lhs_lp(asm, vertices)
        if not feasible:
            return LhsFeasibilityReport(False, True, "polytope-vertices", len(strategies))
        model = _decode_model(x_opt, strategies, vertices)
        return LhsFeasibilityReport(True, True, "polytope-vertices", len(strategies),
                                    model, _model_residual(asm, model))

    outer_vertices = _lp_vertices(bob_space, outer=True)
    feasible, x_opt, strategies = _lhs_lp(asm, outer_vertices)
    if not feasible:
        return LhsFeasibilityReport(False, True, f"disc-outer({DISC_POLYGON_VERTICES})",
                                    len(strategies))
    inner_vertices = _lp_vertices(bob_space, outer=False)
    inner_feasible, inner_x, _ = _lhs_lp(asm, inner_vertices)
    if inner_feasible:
        model = _decode_model(inner_x, strategies, inner_vertices)
        return LhsFeasibilityReport(True, True, f"disc-inner({DISC_POLYGON_VERTICES})",
                                    len(strategies), model, _model_residual(asm, model))
    model = _decode_model(x_opt, strategies, outer_vertices)
    return LhsFeasibilityReport(True, False, f"disc-outer({DISC_POLYGON_VERTICES})",
                                len(strategies), model, _model_residual(asm, model))


def steering_implies_violation_check(
    asm: Assemblage,
    pairing: Mapping[str, str],
    bob_settings: Sequence[Measurement | str],
    theory: Theory,
) -> dict:
    """Check that a certainty violation only ever comes with LHS infeasibility."""
    lhs = conditioned_certainty_sum(asm, pairing, bob_settings, theory)
    bound = upsilon_star(theory, bob_settings[0], bob_settings[1]).upsilon_star
    violated = lhs > bound + GEOM_TOL
    feas = lhs_model_feasible(asm, theory.space)
    return {
        "conditioned_sum": lhs,
        "upsilon_star": bound,
        "violated": violated,
        "lhs_feasible": feas.feasible,
        "implication_holds": (not violated) or (not feas.feasible),
        "feasibility": feas,
    }


def assemblage_to_json(asm: Assemblage, space: StateSpace) -> dict:
    """JSON form consumed by the lhs-test command: space, settings, weighted entries."""
    entries = []
    for x in asm.settings:
        for a, (w, s) in enumerate(asm.outcomes(x)):
            entries.append({"x": x, "a": a, "weight": w, "state": state_to_json(s)})
    return {"space": space_to_json(space), "settings": list(asm.settings), "entries": entries}


def assemblage_from_json(data: dict) -> tuple[Assemblage, StateSpace]:
    """Inverse of assemblage_to_json."""
    space = space_from_json(data["space"])
    entries = {
        (e["x"], int(e["a"])): (float(e["weight"]), state_from_json(e["state"]))
        for e in data["entries"]
    }
    return Assemblage(tuple(data["settings"]), entries), space


def smeared_assemblage(asm: Assemblage, kappas: Mapping[str, float]) -> Assemblage:
    """Assemblage produced when Alice unsharpens her dichotomic settings.

    Smearing a setting by kappa mixes each subnormalized conditioned state
    with (1-kappa)/2 of the reduced state, exactly as replacing Alice's effect
    e by kappa e + (1-kappa)/2 u does.
    """
    reduced = asm.reduced_state().point
    entries: dict[tuple[str, int], tuple[float, State]] = {}
    for x in asm.settings:
        kappa = kappas.get(x, 1.0)
        if not 0.0 < kappa <= 1.0:
            raise ValueError("smearing parameter must lie in (0, 1]")
        rule = asm.outcomes(x)
        if len(rule) != 2:
            raise ValueError("smearing is defined for dichotomic settings")
        for a, (w, omega) in enumerate(rule):
            vec = kappa * w * omega.point + 0.5 * (1.0 - kappa) * reduced
            weight = kappa * w + 0.5 * (1.0 - kappa)
            entries[(x, a)] = (weight, State(vec / weight))
    return Assemblage(asm.settings, entries)
