"""CHSH values and bounds, no-signaling checks, dimension counting, classification.

The classification sorts a theory by what its correlations can do: signaling
correlations put it in Det; non-signaling correlations that beat the
conditioned-certainty bound put it in Ver-complete; otherwise it is
operationally local over the tested instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import Theory
from .steering import operational_nonlocality_test
from .theories import BipartiteState, Correlation, correlation_from

DET = "Det"
VER_COMPLETE = "Ver-complete"
OPERATIONALLY_LOCAL = "OperationallyLocal"

LOCALITY_CAVEAT = "locality certified only over the tested states and settings"


@dataclass(frozen=True)
class ScenarioShape:
    """Cardinalities |X|, |Y|, |A|, |B| of a bipartite input/output scenario."""

    nX: int
    nY: int
    nA: int
    nB: int

    def __post_init__(self):
        if min(self.nX, self.nY, self.nA, self.nB) < 1:
            raise ValueError("all scenario cardinalities must be >= 1")


@dataclass(frozen=True, eq=False)
class Classification:
    """Verdict label plus the diagnostics that produced it."""

    label: str
    evidence: dict


def _correlators(c: Correlation) -> np.ndarray:
    """<a b> per setting pair with outcome 0 mapped to +1 and outcome 1 to -1."""
    if c.shape != (2, 2, 2, 2):
        raise ValueError("CHSH requires the 2-input/2-output scenario shape")
    signs = np.array([1.0, -1.0])
    return np.einsum("xyab,a,b->xy", c.table, signs, signs)


def chsh_value(c: Correlation) -> float:
    """|<a0 b0> + <a0 b1> + <a1 b0> - <a1 b1>| of a 2x2x2x2 correlation."""
    e = _correlators(c)
    return float(abs(e[0, 0] + e[0, 1] + e[1, 0] - e[1, 1]))


def chsh_bound_uncertainty(varsigma: float, upsilon: float) -> float:
    """CHSH ceiling 4 varsigma (upsilon - 1) from steering strength and certainty bound."""
    if not 0.5 - 1e-12 <= varsigma <= 1.0 + 1e-12:
        raise ValueError("steering strength must lie in [1/2, 1]")
    if not 1.0 - 1e-12 <= upsilon <= 2.0 + 1e-12:
        raise ValueError("upsilon must lie in [1, 2]")
    return 4.0 * varsigma * (upsilon - 1.0)


def chsh_bound_incompat(kappa_opt: float) -> float:
    """CHSH ceiling 2 / kappa_opt from the compatibility threshold."""
    if not 0.5 - 1e-12 <= kappa_opt <= 1.0 + 1e-12:
        raise ValueError("kappa_opt must lie in [1/2, 1]")
    return 2.0 / kappa_opt


def tsirelson_tau(tau: float) -> float:
    """CHSH ceiling 2 * 2^(1/tau) for the tau family of theories."""
    if tau < 1.0:
        raise ValueError("tau must be >= 1")
    return float(2.0 * 2.0 ** (1.0 / tau))


def is_nosignaling(c: Correlation, tol: float = 1e-9) -> tuple[bool, float]:
    """Check both marginal-independence conditions; return verdict and worst deviation."""
    table = c.table
    p_a = table.sum(axis=3)  # P(a | x, y), indexed [x, y, a]
    p_b = table.sum(axis=2)  # P(b | x, y), indexed [x, y, b]
    dev_a = np.max(np.abs(p_a - p_a[:, :1, :])) if table.shape[1] > 1 else 0.0
    dev_b = np.max(np.abs(p_b - p_b[:1, :, :])) if table.shape[0] > 1 else 0.0
    worst = float(max(dev_a, dev_b))
    return worst <= tol, worst


def dim_nosig(s: ScenarioShape) -> int:
    """Free parameters of a non-signaling behavior: joint block plus both marginals."""
    return (s.nX * s.nY * (s.nA - 1) * (s.nB - 1)
            + s.nX * (s.nA - 1) + s.nY * (s.nB - 1))


def c_nosig(s: ScenarioShape) -> int:
    """Number of independent no-signaling constraints."""
    return s.nX * (s.nY - 1) * (s.nA - 1) + s.nY * (s.nX - 1) * (s.nB - 1)


def dim_prob(s: ScenarioShape) -> int:
    """Dimension of the unconstrained conditional-probability polytope."""
    return s.nX * s.nY * (s.nA * s.nB - 1)


def classify(
    theory: Theory,
    test_states: Sequence[BipartiteState],
    bob_settings: tuple[str, str] = ("X", "Z"),
    pairing: Mapping[str, str] | None = None,
) -> Classification:
    """Det / Ver-complete / OperationallyLocal over the supplied witness states.

    A Ver-complete verdict is constructive (it names a violating state); the
    local verdict is qualified, since only the tested instances were examined.
    """
    if pairing is None:
        pairing = {y: y for y in bob_settings}
    alice_settings = tuple(dict.fromkeys(pairing[y] for y in bob_settings))
    records = []
    signaling = False
    witness = None
    for state in test_states:
        corr = correlation_from(state, alice_settings, bob_settings)
        nosig, deviation = is_nosignaling(corr)
        record: dict = {"state": state.name, "nosignaling": nosig,
                        "signaling_deviation": deviation}
        if not nosig:
            signaling = True
            records.append(record)
            continue
        verdict = operational_nonlocality_test(state, pairing, bob_settings, theory)
        record.update(lhs=verdict.lhs, bound=verdict.bound, violated=verdict.violated,
                      margin=verdict.margin)
        if verdict.violated and witness is None:
            witness = state.name
        records.append(record)
    if signaling:
        label = DET
    elif witness is not None:
        label = VER_COMPLETE
    else:
        label = OPERATIONALLY_LOCAL
    evidence = {"theory": theory.name, "records": records, "witness": witness}
    if label == OPERATIONALLY_LOCAL:
        evidence["caveat"] = LOCALITY_CAVEAT
    return Classification(label, evidence)
