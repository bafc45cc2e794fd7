"""Command-line front end: theory reports, protocol runs, bound calculators.

All commands print JSON (or CSV/SVG where noted) and are deterministic given
their flags and the seed; ``report`` carries a timestamp unless --no-meta is
passed.  The default seed comes from the OPNONLOC_SEED environment variable.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np
import scipy

from . import __version__
from .bell import (
    ScenarioShape,
    c_nosig,
    chsh_bound_incompat,
    chsh_bound_uncertainty,
    chsh_value,
    classify,
    dim_nosig,
    dim_prob,
    is_nosignaling,
)
from .compatibility import (
    family_point,
    jointly_measurable_lp,
    jointly_measurable_rebit,
    kappa_opt_bisect,
    spekkens_fine_analysis,
    unsharpen,
)
from .core import DISC, state_to_json
from .figure import state_space_svg
from .protocol import PREPARE_AFTER, PREPARE_BEFORE, ProtocolConfig, run_protocol, summarize
from .steering import (
    assemblage_from,
    assemblage_from_json,
    lhs_model_feasible,
    steering_implies_violation_check,
)
from .theories import (
    BIPARTITE_STATES,
    STATE_THEORY,
    THEORIES,
    Correlation,
    correlation_from,
    make_pr_box,
)
from .uncertainty import upsilon_star

# Per-theory family parameters feeding the CHSH bound table.  The toy bit sits
# outside the tau family: its Bell ceiling comes from meta-compatibility.
_BETA = {"classical": 2.0, "rebit": 1.0, "gbit": 1.0}
_NOTES = {
    "spekkens": "Bell-local: every pair of observables is meta-compatible, "
    "so a global joint distribution exists",
}


def _default_seed() -> int:
    return int(os.environ.get("OPNONLOC_SEED", "0"))


def _emit(obj, args) -> None:
    out = json.dumps(obj, indent=2, sort_keys=True)
    print(out)


def _theory(name: str):
    if name not in THEORIES:
        raise SystemExit(f"unknown theory {name!r}; choose from {sorted(THEORIES)}")
    return THEORIES[name]()


def _bipartite(name: str):
    if name not in BIPARTITE_STATES:
        raise SystemExit(f"unknown state {name!r}; choose from {sorted(BIPARTITE_STATES)}")
    return BIPARTITE_STATES[name]()


def _parse_pairing(text: str | None, bob_settings: tuple[str, str]) -> dict[str, str]:
    if not text:
        return {y: y for y in bob_settings}
    pairing = {}
    for chunk in text.split(","):
        y, _, x = chunk.partition("=")
        if not x:
            raise SystemExit(f"bad pairing chunk {chunk!r}; expected y=x")
        pairing[y.strip()] = x.strip()
    return pairing


def _theory_kappa(name: str, theory) -> float:
    if theory.space.geometry_kind == DISC:
        return float(2.0 ** -0.5)
    return kappa_opt_bisect(theory.measurement("X"), theory.measurement("Z"), theory.space)


def _witness_chsh(name: str) -> float:
    if name == "gbit":
        return chsh_value(make_pr_box())
    if name == "rebit":
        corr = correlation_from(BIPARTITE_STATES["singlet"](), ("D+", "D-"), ("X", "Z"))
        return chsh_value(corr)
    if name == "spekkens":
        corr = Correlation(spekkens_fine_analysis()["correlation_table"])
        return chsh_value(corr)
    corr = correlation_from(BIPARTITE_STATES["classical-corr"](), ("X", "Z"), ("X", "Z"))
    return chsh_value(corr)


_CANONICAL_WITNESS = {
    "rebit": "singlet",
    "spekkens": "spekkens-ent",
    "gbit": "pr",
    "classical": "classical-corr",
}


def cmd_report(args) -> None:
    rows = []
    for name in ("classical", "rebit", "spekkens", "gbit"):
        theory = _theory(name)
        ub = upsilon_star(theory, "X", "Z")
        verdict = classify(theory, [_bipartite(_CANONICAL_WITNESS[name])])
        kappa = _theory_kappa(name, theory)
        beta = _BETA.get(name)
        row = {
            "theory": name,
            "upsilon_star": ub.upsilon_star,
            "kappa_opt": kappa,
            "beta": beta,
            "varsigma": None if beta is None else 1.0 / beta,
            "chsh_bound_incompat": chsh_bound_incompat(kappa),
            "chsh_bound_uncertainty": None if beta is None else
            chsh_bound_uncertainty(1.0 / beta, ub.upsilon_star),
            "chsh_witness": _witness_chsh(name),
            "verdict": verdict.label,
        }
        if name in _NOTES:
            row["note"] = _NOTES[name]
        rows.append(row)
    bundle = {"rows": rows}
    meta = {"seed": args.seed, "versions": {"opnonloc": __version__,
                                            "numpy": np.__version__,
                                            "scipy": scipy.__version__}}
    if not args.no_meta:
        meta["created_utc"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    bundle["meta"] = meta
    if args.format == "md":
        cols = ("theory", "upsilon_star", "kappa_opt", "beta", "varsigma",
                "chsh_bound_incompat", "chsh_witness", "verdict")
        lines = ["| " + " | ".join(cols) + " |",
                 "|" + "|".join(["---"] * len(cols)) + "|"]
        for row in rows:
            cells = []
            for c in cols:
                v = row.get(c)
                cells.append("-" if v is None else (f"{v:.4f}" if isinstance(v, float) else str(v)))
            lines.append("| " + " | ".join(cells) + " |")
        print("\n".join(lines))
        return
    _emit(bundle, args)


def cmd_uncertainty(args) -> None:
    theory = _theory(args.theory)
    ub = upsilon_star(theory, args.y0, args.y1)
    _emit({
        "theory": args.theory,
        "y0": args.y0,
        "y1": args.y1,
        "upsilon_star": ub.upsilon_star,
        "maximizer": state_to_json(ub.maximizer),
    }, args)


def cmd_steer(args) -> None:
    state = _bipartite(args.state)
    theory = _theory(args.theory or STATE_THEORY[args.state])
    bob_settings = tuple(args.bob_settings.split(","))
    pairing = _parse_pairing(args.pairing, bob_settings)
    asm = assemblage_from(state, tuple(dict.fromkeys(pairing[y] for y in bob_settings)))
    result = steering_implies_violation_check(asm, pairing, bob_settings, theory)
    feas = result["feasibility"]
    _emit({
        "state": args.state,
        "theory": theory.name,
        "bob_settings": list(bob_settings),
        "pairing": pairing,
        "conditioned_sum": result["conditioned_sum"],
        "upsilon_star": result["upsilon_star"],
        "violated": result["violated"],
        "margin": result["conditioned_sum"] - result["upsilon_star"],
        "lhs_model": {
            "feasible": feas.feasible,
            "certified": feas.certified,
            "approximation": feas.approximation,
        },
        "implication_holds": result["implication_holds"],
    }, args)


def cmd_lhs_test(args) -> None:
    with open(args.assemblage, encoding="utf-8") as fh:
        data = json.load(fh)
    asm, space = assemblage_from_json(data)
    report = lhs_model_feasible(asm, space)
    _emit({
        "feasible": report.feasible,
        "certified": report.certified,
        "approximation": report.approximation,
        "n_strategies": report.n_strategies,
        "max_residual": report.max_residual,
    }, args)


def cmd_protocol(args) -> None:
    state = _bipartite(args.state)
    theory = _theory(args.theory or STATE_THEORY[args.state])
    mode = {"before": PREPARE_BEFORE, "after": PREPARE_AFTER}[args.mode]
    cfg = ProtocolConfig(
        state=state,
        bob_settings=tuple(args.bob_settings.split(",")),
        trials=args.trials,
        seed=args.seed,
        mode=mode,
        pairing=_parse_pairing(args.pairing, tuple(args.bob_settings.split(","))),
    )
    report = run_protocol(cfg, theory)
    payload = report.to_json()
    payload["summary"] = summarize(report)
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_chsh(args) -> None:
    if args.state == "pr":
        corr = make_pr_box()
        settings: dict = {"alice": ["x=0", "x=1"], "bob": ["y=0", "y=1"]}
    else:
        state = _bipartite(args.state)
        if args.angles:
            degs = [float(v) for v in args.angles.split(",")]
            if len(degs) != 4:
                raise SystemExit("--angles expects a0,a1,b0,b1 in degrees")
            alice = tuple(f"deg:{d:g}" for d in degs[:2])
            bob = tuple(f"deg:{d:g}" for d in degs[2:])
        else:
            alice = bob = ("X", "Z")
        corr = correlation_from(state, alice, bob)
        settings = {"alice": list(alice), "bob": list(bob)}
    nosig, deviation = is_nosignaling(corr)
    _emit({
        "state": args.state,
        "settings": settings,
        "chsh": chsh_value(corr),
        "nosignaling": nosig,
        "signaling_deviation": deviation,
    }, args)


def cmd_dims(args) -> None:
    shape = ScenarioShape(args.X, args.Y, args.A, args.B)
    _emit({
        "shape": {"X": shape.nX, "Y": shape.nY, "A": shape.nA, "B": shape.nB},
        "dim_nosig": dim_nosig(shape),
        "c_nosig": c_nosig(shape),
        "dim_prob": dim_prob(shape),
    }, args)


def cmd_jm(args) -> None:
    theory = _theory(args.theory)
    if theory.space.geometry_kind == DISC:
        feasible = jointly_measurable_rebit(args.lam, args.mu)
        method = "analytic lam^2 + mu^2 <= 1"
    else:
        feasible = jointly_measurable_lp(
            unsharpen(theory.measurement("X"), args.lam),
            unsharpen(theory.measurement("Z"), args.mu),
            theory.space,
        )
        method = "master-effect LP"
    _emit({
        "theory": args.theory,
        "lambda": args.lam,
        "mu": args.mu,
        "jointly_measurable": feasible,
        "method": method,
    }, args)


def cmd_jm_region(args) -> None:
    theory = _theory(args.theory)
    lines = ["lambda,mu,feasible"]
    for i in range(1, args.grid + 1):
        lam = i / args.grid
        for j in range(1, args.grid + 1):
            mu = j / args.grid
            if theory.space.geometry_kind == DISC:
                feasible = jointly_measurable_rebit(lam, mu)
            else:
                feasible = jointly_measurable_lp(
                    unsharpen(theory.measurement("X"), lam),
                    unsharpen(theory.measurement("Z"), mu),
                    theory.space,
                )
            lines.append(f"{lam:.6f},{mu:.6f},{int(feasible)}")
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_family(args) -> None:
    point = family_point(args.tau, args.beta)
    _emit({
        "tau": point.tau,
        "kappa_opt": point.kappa_opt,
        "alpha": point.alpha,
        "upsilon_star": point.upsilon_star,
        "beta": point.beta,
        "tsirelson": 2.0 / point.kappa_opt,
    }, args)


def cmd_classify(args) -> None:
    theory = _theory(args.theory)
    result = classify(theory, [_bipartite(_CANONICAL_WITNESS[args.theory])])
    _emit({"theory": args.theory, "label": result.label, "evidence": result.evidence}, args)


def cmd_figure(args) -> None:
    svg = state_space_svg()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opnonloc",
        description="Operational-nonlocality calculations for convex operational theories.",
    )
    parser.add_argument("--seed", type=int, default=_default_seed(),
                        help="RNG seed (default: OPNONLOC_SEED env var or 0)")
    parser.add_argument("--no-meta", action="store_true",
                        help="omit timestamps from report output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="theory-by-theory verdicts and bound table")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("uncertainty", help="certainty-sum bound of a theory")
    p.add_argument("--theory", required=True)
    p.add_argument("--y0", default="X")
    p.add_argument("--y1", default="Z")
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("steer", help="conditioned-certainty test plus LHS feasibility")
    p.add_argument("--state", required=True)
    p.add_argument("--theory")
    p.add_argument("--pairing", help="comma-separated y=x pairs (default: matched labels)")
    p.add_argument("--bob-settings", default="X,Z")
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("lhs-test", help="LHS feasibility of an assemblage JSON file")
    p.add_argument("--assemblage", required=True)
    p.set_defaults(func=cmd_lhs_test)

    p = sub.add_parser("protocol", help="Monte Carlo certificate verification run")
    p.add_argument("--state", required=True)
    p.add_argument("--theory")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, dest="seed")
    p.add_argument("--mode", choices=("before", "after"), default="before")
    p.add_argument("--pairing")
    p.add_argument("--bob-settings", default="X,Z")
    p.add_argument("--out")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("chsh", help="CHSH value of a named state")
    p.add_argument("--state", required=True)
    p.add_argument("--angles", help="a0,a1,b0,b1 in degrees (rebit states only)")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("dims", help="dimension formulas for a scenario shape")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--Y", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("jm", help="joint measurability of unsharp X and Z")
    p.add_argument("--theory", required=True)
    p.add_argument("--lambda", type=float, required=True, dest="lam")
    p.add_argument("--mu", type=float, required=True)
    p.set_defaults(func=cmd_jm)

    p = sub.add_parser("jm-region", help="CSV scan of the joint-measurability region")
    p.add_argument("--theory", required=True)
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_jm_region)

    p = sub.add_parser("family", help="closed-form parameters of the tau family")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("classify", help="Det / Ver-complete / OperationallyLocal verdict")
    p.add_argument("--theory", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("figure", help="emit the state-space SVG")
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _default_seed()
    try:
        args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # CLI boundary: report and signal failure
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
