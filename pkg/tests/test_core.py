"""Core state/effect/measurement behavior against independent oracles."""

import numpy as np
import pytest

from opnonloc import (
    Effect,
    Measurement,
    State,
    StateSpace,
    Theory,
    evaluate_effect,
    measure_distribution,
    mix_states,
)
from opnonloc.core import (
    measurement_from_json,
    measurement_to_json,
    space_from_json,
    space_to_json,
    state_from_json,
    state_to_json,
    theory_from_json,
    theory_to_json,
)
from opnonloc.theories import gbit_vertex, rebit_state, spekkens_state

from .oracles import born_prob, spekkens_distribution

DISC_ORACLE_45 = 0.8535533905932737  # (1 + cos 45deg)/2 via matrix arithmetic


def test_unit_effect_is_one_everywhere(rebit, gbit, spekkens, classical):
    for theory in (rebit, gbit, spekkens, classical):
        unit = Effect.unit(theory.space.dim)
        states = theory.valid_states or tuple(State(v) for v in theory.space.vertices)
        if theory.space.geometry_kind == "disc":
            states = tuple(rebit_state(t) for t in np.linspace(0, 2 * np.pi, 7))
        for s in states:
            assert evaluate_effect(unit, s) == 1.0


def test_gbit_vertex_deterministic(gbit):
    effect = gbit.measurement("X").effects[0]
    assert evaluate_effect(effect, State(np.array([1.0, 1.0]))) == 1.0


def test_rebit_45_degrees_matches_matrix_oracle(rebit):
    state = rebit_state(np.pi / 4.0)
    value = evaluate_effect(rebit.measurement("X").effects[0], state)
    assert abs(value - DISC_ORACLE_45) <= 1e-12
    assert abs(value - born_prob(0.0, np.pi / 4.0)) <= 1e-12


def test_evaluate_effect_dimension_mismatch(rebit):
    with pytest.raises(ValueError):
        evaluate_effect(rebit.measurement("X").effects[0], State(np.array([1.0])))


def test_evaluate_effect_rejects_out_of_range():
    overshoot = Effect(np.array([2.0, 0.0]), 0.0)
    with pytest.raises(ValueError):
        evaluate_effect(overshoot, State(np.array([1.0, 0.0])))


def test_evaluate_effect_clamps_roundoff():
    nearly_one = Effect(np.zeros(2), 1.0 + 5e-13)
    assert evaluate_effect(nearly_one, State(np.zeros(2))) == 1.0
    nearly_zero = Effect(np.zeros(2), -5e-13)
    assert evaluate_effect(nearly_zero, State(np.zeros(2))) == 0.0


def test_measure_distribution_mixed_gbit(gbit):
    dist = measure_distribution(gbit.measurement("X"), State(np.array([0.5, 0.5])))
    assert np.allclose(dist, [0.5, 0.5], atol=1e-15)


def test_measure_distribution_spekkens_matches_ontic_counting(spekkens):
    for meas in ("X", "Y", "Z"):
        for name in ("x+", "x-", "y+", "y-", "z+", "z-", "mixed"):
            dist = measure_distribution(spekkens.measurement(meas), spekkens_state(name))
            assert np.allclose(dist, spekkens_distribution(meas, name), atol=1e-12), \
                (meas, name)


def test_measure_distribution_spekkens_quoted_values(spekkens):
    assert np.allclose(
        measure_distribution(spekkens.measurement("X"), spekkens_state("x+")), [1.0, 0.0]
    )
    assert np.allclose(
        measure_distribution(spekkens.measurement("Z"), spekkens_state("x+")), [0.5, 0.5]
    )


def test_distribution_invariant_under_redecomposition(gbit):
    point = np.array([0.5, 0.5])
    bare = State(point)
    # Two different convex decompositions of the square's center.
    diag = gbit.space.state(point, weights=((0, 0.5), (3, 0.5)))
    anti = gbit.space.state(point, weights=((1, 0.5), (2, 0.5)))
    for meas in gbit.measurements:
        d0 = measure_distribution(meas, bare)
        assert np.array_equal(d0, measure_distribution(meas, diag))
        assert np.array_equal(d0, measure_distribution(meas, anti))


def test_mix_states_identity_and_midpoint(gbit):
    s = State(np.array([0.25, 0.75]))
    assert np.allclose(mix_states([(1.0, s)]).point, s.point)
    mid = mix_states([(0.5, gbit_vertex(1, 1)), (0.5, gbit_vertex(0, 0))])
    assert np.allclose(mid.point, [0.5, 0.5])


def test_spekkens_mixing_identity(spekkens):
    via_x = mix_states([(0.5, spekkens_state("x+")), (0.5, spekkens_state("x-"))], spekkens)
    via_y = mix_states([(0.5, spekkens_state("y+")), (0.5, spekkens_state("y-"))], spekkens)
    via_z = mix_states([(0.5, spekkens_state("z+")), (0.5, spekkens_state("z-"))], spekkens)
    assert np.allclose(via_x.point, via_y.point, atol=1e-15)
    assert np.allclose(via_x.point, via_z.point, atol=1e-15)
    assert np.allclose(via_x.point, spekkens_state("mixed").point, atol=1e-15)


def test_mix_states_nonconvex_rejects_invalid_mixture(spekkens):
    with pytest.raises(ValueError):
        mix_states([(0.7, spekkens_state("x+")), (0.3, spekkens_state("x-"))], spekkens)


def test_mix_states_weight_validation(gbit):
    s = State(np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        mix_states([(0.6, s), (0.6, s)])
    with pytest.raises(ValueError):
        mix_states([(-0.1, s), (1.1, s)])


def test_effect_validity_extends_from_vertices_to_hull():
    # Affine functionals attain extremes at extreme points, so validity on the
    # vertex list is validity everywhere; spot-check on random hull points.
    rng = np.random.default_rng(20260810)
    for _ in range(50):
        dim = int(rng.integers(1, 4))
        n_verts = int(rng.integers(dim + 1, dim + 5))
        vertices = rng.normal(size=(n_verts, dim))
        space = StateSpace(dim, vertices)
        raw_linear = rng.normal(size=dim)
        raw = Effect(raw_linear, 0.0)
        lo, hi = raw.value_range(space)
        if hi - lo < 1e-9:
            continue
        effect = Effect(raw_linear / (hi - lo), -lo / (hi - lo))
        assert effect.is_valid_on(space, tol=1e-9)
        for _ in range(20):
            w = rng.dirichlet(np.ones(n_verts))
            value = effect.value_at(w @ vertices)
            assert -1e-9 <= value <= 1.0 + 1e-9


def test_measurement_must_sum_to_unit():
    half = Effect(np.array([0.5]), 0.0)
    with pytest.raises(ValueError):
        Theory(
            "broken",
            StateSpace(1, np.array([[0.0], [1.0]])),
            (Measurement("bad", (half, half)),),
        )


def test_state_membership_checks(gbit, rebit):
    with pytest.raises(ValueError):
        gbit.space.state([1.2, 0.0])
    with pytest.raises(ValueError):
        rebit.space.state([0.8, 0.8])
    inside = rebit.space.state([0.5, 0.5])
    assert rebit.space.contains(inside.point)


def test_weights_must_reconstruct_point(gbit):
    with pytest.raises(ValueError):
        gbit.space.state([0.5, 0.5], weights=((0, 1.0),))


def test_json_round_trips(gbit, rebit, spekkens, classical):
    for theory in (gbit, rebit, spekkens, classical):
        back = theory_from_json(theory_to_json(theory))
        assert back.name == theory.name
        assert back.space.dim == theory.space.dim
        assert np.allclose(back.space.vertices, theory.space.vertices)
        assert len(back.measurements) == len(theory.measurements)
        for m0, m1 in zip(theory.measurements, back.measurements):
            assert m0.label == m1.label
            for e0, e1 in zip(m0.effects, m1.effects):
                assert np.array_equal(e0.linear, e1.linear)
                assert e0.offset == e1.offset

    state = gbit.space.state([0.5, 0.5], weights=((0, 0.5), (3, 0.5)))
    back = state_from_json(state_to_json(state))
    assert np.array_equal(back.point, state.point)
    assert back.weights == state.weights

    space = space_from_json(space_to_json(rebit.space))
    assert space.geometry_kind == "disc"

    meas = measurement_from_json(measurement_to_json(gbit.measurement("X")))
    assert meas.label == "X"
