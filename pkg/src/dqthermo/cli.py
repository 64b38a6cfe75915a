"""Command-line front end.

Exit status: 0 on success, 1 when an invariant is violated or a target is not
reached, 2 when the input cannot be parsed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .carnot import CycleError, CycleReport, CycleSpec, efficiency_sweep, refine_cycle
from .continuous import SampledPath, match_continuous, omega_check
from .extremal import extremal_heat, sampled_heats
from .io import ExtremalSpec, SpecError, TrajectorySpec, emit_report, input_digest, parse_spec, report_document
from .linalg import haar_random_unitaries
from .refinement import saturate
from .trajectory import StepError, run_trajectory, summarize

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _expect(obj, kind, command: str):
    if not isinstance(obj, kind):
        raise _Failure(EXIT_INPUT, f"'{command}' needs a {kind.__name__} document, got {type(obj).__name__}")
    return obj


def _run(spec: TrajectorySpec):
    try:
        return run_trajectory(spec.initial, spec.steps)
    except StepError as exc:
        raise _Failure(EXIT_VIOLATION, str(exc)) from exc


def _analyze(spec, args):
    t = _run(_expect(spec, TrajectorySpec, "analyze"))
    rep = summarize(t)
    result = asdict(rep)
    result["per_step"] = [asdict(r) for r in rep.per_step]
    ok = rep.clausius_holds and all(abs(r.first_law_residual) <= 1e-10 * (1 + abs(r.delta_u)) for r in t.ledgers)
    return result, result["per_step"], ok


def _refine(spec, args):
    t = _run(_expect(spec, TrajectorySpec, "refine"))
    tol = args.tol if args.tol is not None else 1e-3
    sat = saturate(t, tol, n_max=args.nmax)
    check = summarize(sat.trajectory)
    rows = [{"n": r.n, "lambda": r.lambda_, "gap": r.gap, "bound": r.bound} for r in sat.table]
    result = {
        "tol": tol,
        "converged": sat.converged,
        "plans": [{"segment_index": p.segment_index, "n": p.n} for p in sat.plans],
        "delta_s": check.delta_s,
        "lambda": check.lambda_,
        "gap": check.clausius_slack,
        "convergence": rows,
    }
    return result, rows, sat.converged


def _extremal(spec, args):
    spec = _expect(spec, ExtremalSpec, "extremal")
    res = extremal_heat(spec.initial, spec.final_hamiltonian, spec.final_beta)
    result = {
        "q_min": res.q_min,
        "q_max": res.q_max,
        "pairing_min": list(res.pairing_min),
        "pairing_max": list(res.pairing_max),
    }
    ok = True
    if args.haar_samples:
        us = haar_random_unitaries(spec.initial.dim, args.haar_samples, seed=args.seed)
        heats = sampled_heats(spec.initial, spec.final_hamiltonian, spec.final_beta, us)
        ok = bool(heats.min() >= res.q_min - 1e-9 and heats.max() <= res.q_max + 1e-9)
        result["haar_check"] = {
            "samples": args.haar_samples,
            "seed": args.seed,
            "sampled_min": float(heats.min()),
            "sampled_max": float(heats.max()),
            "within_extremes": ok,
        }
    return result, [{"q_min": res.q_min, "q_max": res.q_max}], ok


def _cycle_dict(r: CycleReport) -> dict:
    return {
        "n": r.n,
        "mode": r.mode,
        "q_hot": r.q_hot,
        "q_cold": r.q_cold,
        "beta_hot": r.beta_hot,
        "beta_cold": r.beta_cold,
        "work_net": r.work_net,
        "efficiency": r.efficiency,
        "cop": r.cop,
        "carnot_bound": r.carnot_bound,
        "bound_satisfied": r.bound_satisfied,
        "heat_bound": r.heat_bound,
        "delta_s": r.delta_s,
        "closure_error": r.closure_error,
    }


def _carnot(spec, args):
    spec = _expect(spec, CycleSpec, "carnot")
    n = args.refine if args.refine is not None else max(spec.refinement_n, 1)
    try:
        report = refine_cycle(spec, n)
        sweep = efficiency_sweep(spec, range(1, n + 1)) if args.sweep else [report]
    except CycleError as exc:
        raise _Failure(EXIT_VIOLATION, str(exc)) from exc
    result = _cycle_dict(report)
    rows = [
        {"n": r.n, "efficiency": r.efficiency if r.mode != "refrigerator" else r.cop, "bound": r.carnot_bound}
        for r in sweep
    ]
    if args.sweep:
        result["sweep"] = rows
    return result, rows, all(r.bound_satisfied for r in sweep)


def _approx(spec, args):
    path = _expect(spec, SampledPath, "approx")
    tol = args.tol if args.tol is not None else 1e-3
    m = match_continuous(path, tol, beta=args.beta, n_max=args.nmax)
    incs = []
    for k, (d, c) in enumerate(zip(m.decompositions, path.samples[1:])):
        om = omega_check(c, args.beta)
        incs.append({"increment": k, **asdict(d), "omega_sum": om.q_2 + om.q_f, "omega_holds": om.holds})
    result = {
        "tol": tol,
        "beta": args.beta,
        "continuous_heat": m.continuous_heat,
        "gamma_heat": m.gamma_heat,
        "discrete_heat": m.discrete_heat,
        "heat_limit": m.heat_limit,
        "achieved_gap": m.achieved_gap,
        "converged": m.converged,
        "n": m.n,
        "scale": m.scale,
        "increments": incs,
    }
    ok = m.converged and all(i["omega_holds"] and i["q_gamma"] <= i["delta_q"] + 1e-9 for i in incs)
    return result, incs, ok


def _validate(spec, args):
    return {"valid": True, "kind": type(spec).__name__}, [{"valid": True, "kind": type(spec).__name__}], True


COMMANDS = {
    "analyze": (_analyze, "run a trajectory and report heat, work, entropy and the Clausius verdict"),
    "refine": (_refine, "insert intermediate thermal configurations until dS - Lambda <= tol"),
    "extremal": (_extremal, "minimum and maximum heat of a DUT+DTT between Gibbs configurations"),
    "carnot": (_carnot, "run a four-configuration cycle and compare with the Carnot bound"),
    "approx": (_approx, "discrete trajectory matching the heat of a sampled continuous path"),
    "validate": (_validate, "parse and check a spec file without running it"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", nargs="?", default="-", help="spec file (default: stdin)")
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--out-file", type=Path)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float)

    parser = argparse.ArgumentParser(prog="dqthermo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}
    subs["refine"].add_argument("--nmax", type=int, default=100_000)
    subs["extremal"].add_argument("--haar-samples", type=int, default=0)
    subs["carnot"].add_argument("--refine", type=int, metavar="N")
    subs["carnot"].add_argument("--sweep", action="store_true", help="report every n = 1..N")
    subs["approx"].add_argument("--beta", type=float, default=1.0, help="reference inverse temperature")
    subs["approx"].add_argument("--nmax", type=int, default=4096)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.spec == "-" else Path(args.spec).read_text()
    except OSError as exc:
        print(f"dqthermo: cannot read {args.spec}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        spec = parse_spec(text)
        handler, _ = COMMANDS[args.command]
        result, table, ok = handler(spec, args)
    except SpecError as exc:
        print(f"dqthermo: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Failure as exc:
        print(f"dqthermo: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"dqthermo: {exc}", file=sys.stderr)
        return EXIT_VIOLATION

    out = emit_report(report_document(args.command, input_digest(text), result), args.out, table)
    if args.out_file is not None:
        args.out_file.write_text(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
