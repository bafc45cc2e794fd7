"""Shared fixtures: one instance of each theory and helpers for random states."""

from __future__ import annotations

import numpy as np
import pytest

from opnonloc import (
    Theory,
    make_classical_bit,
    make_gbit,
    make_rebit,
    make_spekkens,
)
from opnonloc.core import State


@pytest.fixture(scope="session")
def classical() -> Theory:
    return make_classical_bit()


@pytest.fixture(scope="session")
def rebit() -> Theory:
    return make_rebit()


@pytest.fixture(scope="session")
def spekkens() -> Theory:
    return make_spekkens()


@pytest.fixture(scope="session")
def gbit() -> Theory:
    return make_gbit()


def random_state(theory: Theory, rng: np.random.Generator) -> State:
    """A random valid state of the theory (uniform-ish, not measure-theoretic)."""
    if theory.valid_states is not None:
        return theory.valid_states[rng.integers(len(theory.valid_states))]
    if theory.space.geometry_kind == "disc":
        radius = np.sqrt(rng.random())
        angle = rng.random() * 2.0 * np.pi
        return State(radius * np.array([np.cos(angle), np.sin(angle)]))
    weights = rng.dirichlet(np.ones(theory.space.vertices.shape[0]))
    return State(weights @ theory.space.vertices)
