"""Command-line interface.

Verbs:
  check          decide feasibility of a transformation between two states
  synth          build a circuit plan realizing a feasible transformation
  simulate       forward-simulate a plan (or a raw circuit on a state)
  sample-region  sample the single-mode weak-catalyst reachable region
  verify         run a Monte-Carlo necessity campaign
  lorenz         emit Lorenz-curve (partial sum) data

Exit codes: 0 success / feasible; 2 infeasible or verification failure
(a machine-readable verdict is still emitted); 1 usage or input errors.
All randomized verbs require --seed and are reproducible byte-for-byte.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .engine import GtoCircuit, apply_circuit
from .errors import GtoError, Infeasible
from .feasibility import (
    check_no_catalyst,
    check_single_mode_gto,
    check_strong_approx,
    check_weak_A,
    check_weak_M,
    check_weak_single,
)
from .gaussian import (
    GaussianState,
    GtoJsonError,
    SpectralSummary,
    decompose_cm,
    is_decouplable,
    load_state,
    spectral_summary,
    summary_of,
)
from .synthesis import (
    SynthesisPlan,
    simulate_plan,
    synth_no_catalyst,
    synth_pair_t_transform,
    synth_single_mode,
    synth_weak_A,
    synth_weak_M,
    synth_weak_single,
)
from .verify import (
    CampaignDims,
    approx_catalyst_probe,
    lorenz_csv,
    lorenz_rows,
    necessity_campaign,
    reachable_region_single_mode,
)

CHECK_THEOREMS = ("single-mode", "no-catalyst", "weak-single", "strong-approx", "weak-M", "weak-A")
SYNTH_MODES = ("single-mode", "no-catalyst", "weak-single", "pair-T", "weak-M", "weak-A")
VERIFY_THEOREMS = ("no-catalyst", "strong-approx", "weak-M", "weak-M-bath", "weak-A", "approx-probe")


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(doc, out_path: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_summary(path: str) -> SpectralSummary:
    state = load_state(_read_json(path))
    return summary_of(state)


def _cmd_check(args) -> int:
    source = _load_summary(args.source)
    target = _load_summary(args.target)
    if args.theorem == "single-mode":
        verdict = check_single_mode_gto(source, target)
    elif args.theorem == "no-catalyst":
        verdict = check_no_catalyst(source, target)
    elif args.theorem == "weak-single":
        verdict = check_weak_single(source, target)
    elif args.theorem == "strong-approx":
        if args.delta is None:
            raise GtoJsonError("--delta is required for strong-approx")
        verdict = check_strong_approx(source, target, args.delta)
    elif args.theorem == "weak-M":
        verdict = check_weak_M(source, target, with_bath=args.with_bath)
    else:
        verdict = check_weak_A(source, target)
    doc = verdict.to_dict()
    doc["theorem"] = args.theorem
    _emit(doc, args.out)
    return 0 if verdict.feasible else 2


def _cmd_synth(args) -> int:
    source_state = load_state(_read_json(args.source))
    if isinstance(source_state, GaussianState):
        decomposition = decompose_cm(source_state)
        if args.mode == "no-catalyst" and not is_decouplable(decomposition):
            raise Infeasible(
                "source state is not decouplable; per-mode synthesis is defined "
                "on simultaneously diagonalizable states"
            )
        source = spectral_summary(decomposition)
    else:
        source = source_state
    target = _load_summary(args.target)

    if args.mode == "single-mode":
        p = args.p
        if p is None:
            verdict = check_single_mode_gto(source, target)
            if not verdict.feasible:
                raise Infeasible(verdict.violation)
            p = verdict.witness["p"]
        plan = synth_single_mode(source, p, phase=args.phase)
    elif args.mode == "no-catalyst":
        plan = synth_no_catalyst(source, target)
    elif args.mode == "weak-single":
        plan = synth_weak_single(source, target)
    elif args.mode == "pair-T":
        plan = synth_pair_t_transform(source.mu, target.mu)
    elif args.mode == "weak-M":
        plan = synth_weak_M(source.mu, target.mu, with_bath=args.with_bath)
    else:
        plan = synth_weak_A(source.alpha, target.alpha, use_bath=not args.no_bath)
    _emit(plan.to_dict(), args.out)
    return 0


def _cmd_simulate(args) -> int:
    tol = args.tolerance
    if args.plan:
        plan = SynthesisPlan.from_dict(_read_json(args.plan))
        result = simulate_plan(plan, tol=tol)
        summary = spectral_summary(decompose_cm(result.final_state))
        residuals = {k: v for k, v in result.diagnostics.items()}
        ok = all(
            residuals.get(key, 0.0) <= tol
            for key in ("target_mu_residual", "target_alpha_residual")
        ) and result.catalyst_block_restored in (None, True)
        doc = {
            "final_summary": summary.to_dict(),
            "diagnostics": residuals,
            "catalyst_block_restored": result.catalyst_block_restored,
            "ok": bool(ok),
        }
        _emit(doc, args.out)
        return 0 if ok else 2
    if not args.circuit or not args.state:
        raise GtoJsonError("simulate needs either --plan or both --circuit and --state")
    state = load_state(_read_json(args.state))
    if not isinstance(state, GaussianState):
        raise GtoJsonError("--state must be a covariance-form state document")
    circuit = GtoCircuit.from_dict(_read_json(args.circuit))
    result = apply_circuit(state, circuit)
    doc = {
        "final_state": result.final_state.to_dict(),
        "final_summary": spectral_summary(decompose_cm(result.final_state)).to_dict(),
        "diagnostics": result.diagnostics,
    }
    _emit(doc, args.out)
    return 0


def _cmd_sample_region(args) -> int:
    sample = reachable_region_single_mode(
        args.mu, args.alpha, trials=args.trials, seed=args.seed, filter_eps=args.filter_eps
    )
    if args.format == "csv":
        lines = ["p,q,catalytic,return_error"]
        for p, q, cat, eps in sample.rows():
            lines.append(f"{p!r},{q!r},{int(cat)},{eps!r}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        doc = {
            "points": [[p, q] for p, q in sample.points.tolist()],
            "catalytic": sample.catalytic.tolist(),
            "return_errors": sample.return_errors.tolist(),
            "report": sample.report.to_dict(),
        }
        _emit(doc, args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.theorem == "approx-probe":
        report = approx_catalyst_probe(trials=args.trials, seed=args.seed)
    else:
        dims = CampaignDims(
            n_system_max=args.n_system_max,
            n_bath_max=args.n_bath_max,
            n_catalyst_max=args.n_catalyst_max,
        )
        report = necessity_campaign(
            args.theorem, trials=args.trials, seed=args.seed, dims=dims,
            filter_eps=args.filter_eps,
        )
    _emit(report.to_dict(), args.out)
    return 0 if not report.failures else 2


def _cmd_lorenz(args) -> int:
    doc = _read_json(args.input)
    named = {str(k): np.asarray(v, dtype=float) for k, v in doc.items()}
    rows = lorenz_rows(named)
    if args.format == "csv":
        text = lorenz_csv(rows)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit([[series, k, value] for series, k, value in rows], args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtokit",
        description="Gaussian thermal operations: feasibility, synthesis, simulation, verification",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="decide transformation feasibility")
    p.add_argument("--theorem", required=True, choices=CHECK_THEOREMS)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--delta", type=float, default=None, help="budget for strong-approx")
    p.add_argument("--with-bath", action="store_true", help="weak-M: allow a thermal bath")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("synth", help="synthesize a circuit plan")
    p.add_argument("--mode", required=True, choices=SYNTH_MODES)
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("-p", type=float, default=None, help="single-mode: explicit transmissivity")
    p.add_argument("--phase", type=float, default=0.0, help="single-mode: phase rotation")
    p.add_argument("--with-bath", action="store_true", help="weak-M: allow a thermal bath")
    p.add_argument("--no-bath", action="store_true", help="weak-A: catalyst-only lossy steps")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("simulate", help="forward-simulate a plan or circuit")
    p.add_argument("--plan", default=None)
    p.add_argument("--circuit", default=None)
    p.add_argument("--state", default=None)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sample-region", help="sample the weak-catalyst reachable region")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--filter-eps", type=float, default=1e-8)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sample_region)

    p = sub.add_parser("verify", help="run a Monte-Carlo necessity campaign")
    p.add_argument("--theorem", required=True, choices=VERIFY_THEOREMS)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--filter-eps", type=float, default=1e-8)
    p.add_argument("--n-system-max", type=int, default=3)
    p.add_argument("--n-bath-max", type=int, default=3)
    p.add_argument("--n-catalyst-max", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("lorenz", help="emit Lorenz-curve data")
    p.add_argument("--input", required=True, help="JSON file mapping series name -> vector")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_lorenz)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Infeasible as exc:
        _emit({"feasible": False, "violation": str(exc)}, getattr(args, "out", None))
        return 2
    except (GtoError, GtoJsonError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
