"""Command-line entry point.

Subcommands: spectrum, converge, linearity, gns-check, chsh, ks, postulates.
Exit codes: 0 all checks passed, 1 a check failed (report still written),
2 usage or input error.  Stochastic subcommands require an explicit --seed
(reproducibility is part of the artifact); identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import algebra, fileio, gns, verify
from .ensemble import exact_outcome_std, quantum_average, sample_mean, linearity_check
from .errors import QalabError
from .experiments import (
    ChshConfig,
    chsh_run,
    magic_square,
    mermin_peres_bruteforce,
    mermin_peres_contextual_run,
    no_signaling_check,
    verify_magic_square,
)

USAGE_ERROR = 2
CHECK_FAILED = 1


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(x) if isinstance(x, float) else str(x) for x in row))
    return "\n".join(lines) + "\n"


def _parse_angles(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four comma-separated angles")
    try:
        a, a2, b, b2 = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return (a, a2, b, b2)


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _default_checkpoints(n: int) -> list[int]:
    marks = {n}
    k = 0
    while True:
        value = int(round(10.0 ** (k / 4.0)))
        if value > n:
            break
        marks.add(max(value, 1))
        k += 1
    return sorted(marks)


def cmd_spectrum(args) -> int:
    spec = algebra.spectrum(fileio.load_element(args.infile))
    if args.format == "csv":
        rows = [[float(v), int(m)] for v, m in zip(spec.values, spec.multiplicities)]
        _emit(_csv_text(["value", "multiplicity"], rows), args.out)
    else:
        _emit(
            _json_text(
                {
                    "values": [float(v) for v in spec.values],
                    "multiplicities": [int(m) for m in spec.multiplicities],
                }
            ),
            args.out,
        )
    return 0


def cmd_converge(args) -> int:
    rho = fileio.load_state(args.state)
    obs = fileio.load_element(args.observable)
    checkpoints = list(args.checkpoints) if args.checkpoints else _default_checkpoints(args.trials)
    stats = sample_mean(rho, obs, args.trials, args.seed, checkpoints=checkpoints)
    exact = quantum_average(rho, obs)
    std = exact_outcome_std(rho, obs)
    rows = []
    within = True
    for n_c, running in stats.history:
        bound = 5.0 * std / np.sqrt(n_c)
        err = abs(running - exact)
        rows.append([n_c, float(running), float(exact), float(err), float(bound)])
    final_n, final_mean = stats.history[-1]
    within = bool(abs(final_mean - exact) <= 5.0 * std / np.sqrt(final_n))
    if args.format == "json":
        payload = {
            "rows": [
                {
                    "n": r[0],
                    "running_mean": r[1],
                    "exact_mean": r[2],
                    "abs_error": r[3],
                    "bound": r[4],
                }
                for r in rows
            ],
            "within_bound_at_n": within,
        }
        _emit(_json_text(payload), args.out)
    else:
        _emit(_csv_text(["n", "running_mean", "exact_mean", "abs_error", "bound"], rows), args.out)
    return 0 if within else CHECK_FAILED


def cmd_linearity(args) -> int:
    rho = fileio.load_state(args.state)
    a = fileio.load_element(args.a)
    b = fileio.load_element(args.b)
    report = linearity_check(rho, a, b, args.trials, args.seed)
    payload = {
        "exact": {
            "a": report.exact_a,
            "b": report.exact_b,
            "sum": report.exact_sum,
            "residual": report.exact_residual,
            "pass": report.exact_passed,
        },
        "sampled": {
            "a": report.sampled_a,
            "b": report.sampled_b,
            "sum": report.sampled_sum,
            "residual": report.sampled_residual,
            "bound": 5.0 * report.sigma_combined,
            "pass": report.sampled_passed,
        },
        "trials": report.n,
        "pass": report.passed,
    }
    _emit(_json_text(payload), args.out)
    return 0 if report.passed else CHECK_FAILED


def cmd_gns_check(args) -> int:
    rho = fileio.load_state(args.state)
    elements = [fileio.load_element(p) for p in args.element or []]
    representation = gns.gns_construct(rho)
    report = gns.verify_gns(
        representation, rho, sample_elements=elements or None, seed=args.seed
    )
    _emit(_json_text(report.to_dict()), args.out)
    return 0 if report.passed else CHECK_FAILED


def cmd_chsh(args) -> int:
    cfg = ChshConfig(angles=args.angles, trials=args.trials, master_seed=args.seed)
    report = chsh_run(cfg)
    signaling = no_signaling_check(cfg)
    formulas_agree = abs(report.s_exact - report.s_closed_form) <= 1e-10
    summary = {
        "angles": list(args.angles),
        "trials_per_pair": report.trials_per_pair,
        "seed": report.master_seed,
        "correlations": {
            c.label: {
                "sampled": c.sampled,
                "exact": c.exact,
                "closed_form": c.closed_form,
                "std_error": c.std_error,
            }
            for c in report.correlations
        },
        "S_sampled": report.s_sampled,
        "S_exact": report.s_exact,
        "S_closed_form": report.s_closed_form,
        "abs_S_sampled": abs(report.s_sampled),
        "S_std_error": report.s_std_error,
        "violation_sigmas": report.violation_sigmas,
        "classical_bound": 2.0,
        "formulas_agree": formulas_agree,
        "no_signaling": {
            "exact_residual": signaling.exact_residual,
            "sampled_residual": signaling.sampled_residual,
            "sampled_bound": signaling.sampled_bound,
            "pass": signaling.passed,
        },
    }
    text = _json_text(summary)
    if args.out:
        Path(args.out + ".json").write_text(text)
        rows = [
            [c.label, float(c.angle_a), float(c.angle_b), c.n, c.sampled, c.exact, c.closed_form, c.std_error]
            for c in report.correlations
        ]
        Path(args.out + ".csv").write_text(
            _csv_text(
                ["pair", "angle_a", "angle_b", "n", "sampled", "exact", "closed_form", "std_error"],
                rows,
            )
        )
    else:
        sys.stdout.write(text)
    return 0 if (formulas_agree and signaling.passed) else CHECK_FAILED


def cmd_ks(args) -> int:
    structure = verify_magic_square(magic_square())
    brute = mermin_peres_bruteforce()
    run = mermin_peres_contextual_run(args.trials, args.seed)
    payload = {
        "bruteforce_count": brute,
        "contextual_violations": run.constraint_violations,
        "multivaluedness_witness_rate": run.witness_rate,
        "trials": run.trials,
        "seed": args.seed,
        "structure": {
            "square_residual": structure.square_residual,
            "commute_residual": structure.commute_residual,
            "product_residual": structure.product_residual,
            "pass": structure.passed,
        },
    }
    _emit(_json_text(payload), args.out)
    ok = brute == 0 and run.passed and structure.passed
    return 0 if ok else CHECK_FAILED


def cmd_postulates(args) -> int:
    report = verify.run_postulate_suite(
        seed=args.seed,
        dims=args.dims,
        pairs_per_dim=args.pairs,
        attainment_trials=args.attainment_trials,
        mc_trials=args.mc_trials,
    )
    _emit(_json_text(report.to_dict()), args.out)
    return 0 if report.passed else CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qalab",
        description="Numerical laboratory for an algebraic model of quantum measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and multiplicities of an observable")
    p.add_argument("--in", dest="infile", required=True, help="matrix JSON file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("converge", help="running sample mean vs exact ensemble average")
    p.add_argument("--state", required=True, help="density matrix JSON file")
    p.add_argument("--observable", required=True, help="observable matrix JSON file")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--checkpoints", type=_parse_int_list, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("linearity", help="additivity of the ensemble average")
    p.add_argument("--state", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_linearity)

    p = sub.add_parser("gns-check", help="representation certificate for a state")
    p.add_argument("--state", required=True)
    p.add_argument("--element", action="append", help="observable file (repeatable)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled elements")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gns_check)

    p = sub.add_parser("chsh", help="event-by-event CHSH experiment on the singlet")
    p.add_argument("--angles", type=_parse_angles, required=True, help="a,a',b,b' in radians")
    p.add_argument("--trials", type=int, required=True, help="trials per setting pair")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="prefix for <out>.csv and <out>.json")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("ks", help="magic-square contextuality checks")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("postulates", help="randomized axiom verification suite")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--dims", type=_parse_int_list, default=(2, 3, 4, 8))
    p.add_argument("--pairs", type=int, default=50, help="random pairs per dimension")
    p.add_argument("--attainment-trials", type=int, default=10_000)
    p.add_argument("--mc-trials", type=int, default=20_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_postulates)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (QalabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
