"""Command line: synthesize gains, verify certificate files, run scenarios.

Exit codes: 0 on success, 1 on feasibility or verification failure, 2 on
usage errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import sys

from . import experiments, synthesis
from .errors import InfeasibleError, InvalidInputError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchsync",
        description=(
            "Synthesize, certify, and demonstrate a single state-feedback "
            "controller that synchronizes master/slave copies of the unified "
            "chaotic family under arbitrary switching of its parameter."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    syn = sub.add_parser("synthesize", help="solve the vertex LMIs and write a certificate")
    syn.add_argument("--alpha-min", type=float, default=0.0)
    syn.add_argument("--alpha-max", type=float, default=1.0)
    syn.add_argument("--b", choices=synthesis.B_FORMS, default="ones",
                     help="input distribution: shared scalar channel or per-state gains")
    syn.add_argument("--eps", type=float, default=1e-3, help="floor on Y")
    syn.add_argument("--delta", type=float, default=1e-3, help="strictness each vertex must beat")
    syn.add_argument("--out", required=True, help="certificate file to write")
    syn.set_defaults(func=_cmd_synthesize)

    ver = sub.add_parser("verify", help="re-verify a certificate file")
    ver.add_argument("--cert", required=True)
    ver.add_argument("--grid", type=int, default=101,
                     help="number of evenly spaced parameter values to re-check")
    ver.set_defaults(func=_cmd_verify)

    sim = sub.add_parser("simulate", help="run a named scenario and write a CSV trajectory")
    sim.add_argument("--scenario", required=True, choices=experiments.PRESETS)
    sim.add_argument("--cert", required=True)
    sim.add_argument("--dt", type=float, default=experiments.DEFAULT_DT)
    sim.add_argument("--t-end", type=float, default=experiments.DEFAULT_T_END)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--stride", type=int, default=experiments.DEFAULT_STRIDE)
    sim.add_argument("--out", required=True, help="trajectory CSV to write")
    sim.add_argument("--metrics", help="optional metrics JSON to write")
    sim.set_defaults(func=_cmd_simulate)
    return parser


def _cmd_synthesize(args) -> int:
    problem = synthesis.problem_for_alpha_range(
        args.alpha_min, args.alpha_max, args.b, args.eps, args.delta
    )
    cert = synthesis.solve_feasibility(problem)
    synthesis.save_certificate(cert, args.out)
    print(f"gain K = {cert.k.tolist()}")
    print(f"P eigenvalues = {cert.p_eigenvalues.tolist()}")
    print(f"worst vertex margin (LMI) = {cert.lmi_margins.max():.6e}")
    print(f"worst vertex margin (closed loop) = {cert.bmi_margins.max():.6e}")
    print(f"certificate written to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    try:
        cert = synthesis.load_certificate(args.cert)
    except InvalidInputError as exc:
        print(f"certificate FAILED verification: {exc}", file=sys.stderr)
        return 1
    lo, hi = cert.alpha_range
    b = synthesis.distribution_matrix(cert.b_form)
    grid = synthesis.alpha_grid_margins(cert.p, cert.k, b, args.grid, lo, hi)
    print(f"min eigenvalue of P = {cert.p_min_eig:.6e}")
    print(f"worst vertex margin = {cert.bmi_margins.max():.6e} over {len(cert.bmi_margins)} vertices")
    print(f"worst grid margin = {grid.max():.6e} over {len(grid)} parameter values")
    if grid.max() >= 0.0:
        print("certificate FAILED the parameter-grid check", file=sys.stderr)
        return 1
    print("certificate OK")
    return 0


def _cmd_simulate(args) -> int:
    try:
        cert = synthesis.load_certificate(args.cert)
    except InvalidInputError as exc:
        print(f"refusing to simulate with an invalid certificate: {exc}", file=sys.stderr)
        return 1
    scenario = experiments.scenario_preset(
        args.scenario,
        seed=args.seed,
        dt=args.dt,
        t_end=args.t_end,
        stride=args.stride,
    )
    records, metrics = experiments.run_scenario(scenario, cert)
    experiments.write_trajectory_csv(records, args.out)
    if args.metrics:
        experiments.write_metrics_json(metrics, args.metrics)
    if metrics.diverged:
        print("run diverged; partial trajectory written", file=sys.stderr)
    summary = ", ".join(f"{k}={v}" for k, v in experiments.metrics_to_dict(metrics).items())
    print(f"{len(records)} records -> {args.out} ({summary})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return 1
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
