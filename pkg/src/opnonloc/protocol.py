"""Monte Carlo runs of the certificate verification protocol.

Each trial: Bob announces one of two settings; Alice measures the paired
setting on her half (or, in the prepare-after mode, simply prepares a fresh
optimal state once she knows Bob's choice), sends a certificate predicting
Bob's outcome, and Bob scores it.  The per-setting hit rates estimate the
conditioned certainties whose sum the single-system bound caps.

Randomness is counter-based (Philox keyed by the seed, one row of uniforms
per trial), so runs are reproducible and independent of execution order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import GEOM_TOL, Theory, measure_distribution
from .theories import BipartiteState, resolve_measurement
from .uncertainty import max_single_setting, upsilon_star

PREPARE_BEFORE = "prepare_before"
PREPARE_AFTER = "prepare_after"


@dataclass(frozen=True, eq=False)
class ProtocolConfig:
    """Inputs of one protocol run; the seed fully determines the outcome."""

    state: BipartiteState
    bob_settings: tuple[str, str]
    trials: int
    seed: int
    mode: str = PREPARE_BEFORE
    pairing: Mapping[str, str] | None = field(default=None)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode not in (PREPARE_BEFORE, PREPARE_AFTER):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.pairing is None:
            object.__setattr__(self, "pairing", {y: y for y in self.bob_settings})
        for y in self.bob_settings:
            if y not in self.pairing:
                raise ValueError(f"pairing does not cover Bob setting {y!r}")


@dataclass(frozen=True, eq=False)
class ProtocolReport:
    """Empirical conditioned certainties with their comparison to the bound."""

    state_name: str
    theory_name: str
    mode: str
    seed: int
    trials: int
    settings: tuple[str, str]
    pairing: dict
    counts: tuple[int, int]
    qhat: tuple[float | None, float | None]
    stderr: tuple[float | None, float | None]
    empirical_sum: float | None
    stderr_sum: float | None
    bound: float
    violated: bool | None
    margin: float | None

    def to_json(self) -> dict:
        return {
            "state": self.state_name,
            "theory": self.theory_name,
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
            "settings": list(self.settings),
            "pairing": dict(self.pairing),
            "counts": list(self.counts),
            "qhat": list(self.qhat),
            "stderr": list(self.stderr),
            "empirical_sum": self.empirical_sum,
            "stderr_sum": self.stderr_sum,
            "bound": self.bound,
            "violated": self.violated,
            "margin": self.margin,
        }

    def to_json_bytes(self) -> bytes:
        return json.dumps(self.to_json(), indent=2, sort_keys=True).encode()


def _sample_outcomes(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, len(cdf) - 1)


def run_protocol(cfg: ProtocolConfig, theory: Theory | None = None) -> ProtocolReport:
    """Simulate the verification test and compare the empirical sum to the bound."""
    theory = theory or cfg.state.bob_theory
    y0, y1 = cfg.bob_settings
    bound = upsilon_star(theory, y0, y1).upsilon_star

    bob_meas = [resolve_measurement(theory, y) for y in cfg.bob_settings]
    if cfg.mode == PREPARE_BEFORE:
        # Per (setting, Alice outcome): her outcome weight, Bob's conditioned
        # distribution, and the certificate (modal outcome; first index on ties).
        alice_cdf, bob_cdf, modal = [], [], []
        for j, y in enumerate(cfg.bob_settings):
            rule = cfg.state.conditioned(cfg.pairing[y])
            probs = np.array([p for p, _ in rule])
            alice_cdf.append(np.cumsum(probs))
            dists = [measure_distribution(bob_meas[j], omega) for _, omega in rule]
            bob_cdf.append([np.cumsum(d) for d in dists])
            modal.append([int(np.argmax(d)) for d in dists])
    else:
        # Cheating baseline: a fresh optimal state for the announced setting.
        bob_cdf, modal = [], []
        for j, y in enumerate(cfg.bob_settings):
            best_state, _ = max_single_setting(theory, y)
            dist = measure_distribution(bob_meas[j], best_state)
            bob_cdf.append([np.cumsum(dist)])
            modal.append([int(np.argmax(dist))])

    # Trial i consumes row i of the counter-based stream: (setting, Alice, Bob).
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    uniforms = rng.random((cfg.trials, 3))
    j_arr = np.where(uniforms[:, 0] < 0.5, 0, 1)

    hits = np.zeros(cfg.trials, dtype=bool)
    counts = [0, 0]
    for j in (0, 1):
        mask = j_arr == j
        counts[j] = int(mask.sum())
        if counts[j] == 0:
            continue
        if cfg.mode == PREPARE_BEFORE:
            a_sub = _sample_outcomes(alice_cdf[j], uniforms[mask, 1])
        else:
            a_sub = np.zeros(counts[j], dtype=int)
        u_bob = uniforms[mask, 2]
        b_sub = np.empty(counts[j], dtype=int)
        cert = np.empty(counts[j], dtype=int)
        for a in np.unique(a_sub):
            sel = a_sub == a
            b_sub[sel] = _sample_outcomes(bob_cdf[j][a], u_bob[sel])
            cert[sel] = modal[j][a]
        hits[mask] = b_sub == cert

    qhat: list[float | None] = [None, None]
    stderr: list[float | None] = [None, None]
    for j in (0, 1):
        if counts[j] > 0:
            q = float(hits[j_arr == j].sum() / counts[j])
            qhat[j] = q
            stderr[j] = float(np.sqrt(q * (1.0 - q) / counts[j]))
    if all(q is not None for q in qhat):
        empirical_sum = float(qhat[0] + qhat[1])
        stderr_sum = float(np.sqrt(stderr[0] ** 2 + stderr[1] ** 2))
        # Empirical verdict requires a 3-sigma excess so that sampling noise
        # on a bound-saturating state cannot flip it.
        violated = bool(empirical_sum > bound + max(GEOM_TOL, 3.0 * stderr_sum))
        margin = empirical_sum - bound
    else:
        empirical_sum, stderr_sum, violated, margin = None, None, None, None

    return ProtocolReport(
        state_name=cfg.state.name,
        theory_name=theory.name,
        mode=cfg.mode,
        seed=cfg.seed,
        trials=cfg.trials,
        settings=cfg.bob_settings,
        pairing=dict(cfg.pairing),
        counts=(counts[0], counts[1]),
        qhat=(qhat[0], qhat[1]),
        stderr=(stderr[0], stderr[1]),
        empirical_sum=empirical_sum,
        stderr_sum=stderr_sum,
        bound=bound,
        violated=violated,
        margin=margin,
    )


def summarize(report: ProtocolReport) -> str:
    """One-line human verdict for a protocol report."""
    if report.empirical_sum is None:
        observed = ", ".join(
            f"{y}: n={n}" for y, n in zip(report.settings, report.counts)
        )
        return f"INCONCLUSIVE: not every setting was sampled ({observed})"
    if report.violated:
        return f"VIOLATED: {report.empirical_sum:.3f} > {report.bound:.3f}"
    return f"NOT VIOLATED: {report.empirical_sum:.3f} <= {report.bound:.3f}"
