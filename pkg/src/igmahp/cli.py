"""Command line interface.

Exit codes:
    0  success (simulate: no discrepancy found)
    2  usage or validation error (bad flags, unparsable or invalid matrix)
    3  singular matrix
    4  simulate found a discrepancy
    5  I/O error
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SingularMatrix, ValidationError
from .matrixio import FORMATS, parse_matrix
from .methods import blankmeyer, ligm, nigm, pigm
from .prm import RANDOM_INDEX, ConsistencyReport, consistency, wls_objective
from .simulation import Mode, VerificationConfig, run
from .wls import OptimizerConfig, optimize_wls

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SINGULAR = 3
EXIT_DISCREPANCY = 4
EXIT_IO = 5

DISPLAY_PLACES = 3
MACHINE_PLACES = 12


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class SolveOutput:
    method: str
    weights: list
    wls_objective: float
    consistency: ConsistencyReport
    multiplier: Optional[float] = None
    warnings: list = field(default_factory=list)

    def as_dict(self, places: int = MACHINE_PLACES) -> dict:
        def rnd(x):
            return None if x is None else round(float(x), places)

        return {
            "method": self.method,
            "weights": [rnd(x) for x in self.weights],
            "lambda": rnd(self.multiplier),
            "wls_objective": rnd(self.wls_objective),
            "lambda_max": rnd(self.consistency.lambda_max),
            "ci": rnd(self.consistency.ci),
            "cr": rnd(self.consistency.cr),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_table(self) -> str:
        d = self.as_dict(DISPLAY_PLACES)
        fmt = f"{{:.{DISPLAY_PLACES}f}}"
        lines = [f"method        {d['method']}"]
        lines += [f"w[{i + 1}]{'':<{9 - len(str(i + 1))}}{fmt.format(w)}" for i, w in enumerate(d["weights"])]
        if d["lambda"] is not None:
            lines.append(f"lambda        {fmt.format(d['lambda'])}")
        lines.append(f"wls_objective {fmt.format(d['wls_objective'])}")
        lines.append(f"lambda_max    {fmt.format(d['lambda_max'])}")
        lines.append(f"ci            {fmt.format(d['ci'])}")
        lines.append(f"cr            {'n/a' if d['cr'] is None else fmt.format(d['cr'])}")
        if d["warnings"]:
            lines.append(f"warnings      {', '.join(d['warnings'])}")
        return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="igmahp", description="Inverse Gram Matrix prioritization for AHP")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="derive a priority vector from a matrix file")
    s.add_argument("--input", required=True, help="matrix file (CSV or JSON)")
    s.add_argument("--format", choices=FORMATS, help="input format (default: from extension)")
    s.add_argument("--method", choices=("pigm", "nigm", "ligm", "blankmeyer", "wls"), default="pigm")
    s.add_argument("--r", type=float, default=None, help="shift for nigm (default 1) or ligm (default 0)")
    s.add_argument("--seed", type=int, default=0, help="optimizer seed for --method wls")
    s.add_argument("--max-evals", type=int, default=500_000, help="optimizer budget for --method wls")
    s.add_argument("--json", action="store_true", help="machine-readable output, 12 decimals")

    m = sub.add_parser("simulate", help="run a Monte Carlo verification")
    m.add_argument("--mode", choices=[x.value for x in Mode], default=Mode.IGM_EQUIVALENCE.value)
    m.add_argument("--samples", type=int, required=True)
    m.add_argument("--nmax", type=int, default=15)
    m.add_argument("--scale", type=int, default=9)
    m.add_argument("--epsilon", type=int, default=None)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--r-min", type=float, default=-1000.0)
    m.add_argument("--r-max", type=float, default=1000.0)
    m.add_argument("--max-evals", type=int, default=500_000)
    m.add_argument("--out", default="simulation-report", help="directory for trials.csv and summary.json")
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--timings", action="store_true", help="record per-trial wall time in trials.csv")
    return parser


def solve_output(prm, method: str, r=None, seed: int = 0, max_evals: int = 500_000) -> SolveOutput:
    multiplier = None
    warnings = []
    if method == "wls":
        res = optimize_wls(prm, OptimizerConfig(max_evaluations=max_evals, seed=seed))
        w = res.weights.weights
        label = "WLS"
        if res.budget_exhausted:
            warnings.append("BudgetExhausted")
    else:
        if method == "pigm":
            result = pigm(prm)
        elif method == "nigm":
            result = nigm(prm, 1.0 if r is None else r)
        elif method == "ligm":
            result = ligm(prm, 0.0 if r is None else r)
        else:
            result = blankmeyer(prm)
        w = result.w
        label = result.method
        multiplier = result.multiplier
        warnings.extend(result.diagnostics)
    report = consistency(prm, with_ratio=prm.n in RANDOM_INDEX)
    return SolveOutput(
        method=label,
        weights=[float(x) for x in w],
        wls_objective=wls_objective(prm, w),
        consistency=report,
        multiplier=multiplier,
        warnings=warnings,
    )


def _singular_message(prm, method: str, exc: SingularMatrix) -> str:
    ci = consistency(prm, with_ratio=False).ci
    if method in ("blankmeyer", "nigm") and abs(ci) < 1e-8:
        return ("error: the reduced Gram matrix is singular because the matrix is perfectly "
                f"consistent; {method} cannot be used here (try pigm, ligm, or nigm with r != 0)")
    return f"error: singular matrix: {exc}"


def cmd_solve(args) -> int:
    try:
        doc = parse_matrix(args.input, args.format)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        out = solve_output(doc.prm, args.method, args.r, args.seed, args.max_evals)
    except SingularMatrix as exc:
        print(_singular_message(doc.prm, args.method, exc), file=sys.stderr)
        return EXIT_SINGULAR
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out.to_json() if args.json else out.to_table())
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        cfg = VerificationConfig(
            samples=args.samples,
            mode=Mode(args.mode),
            n_max=args.nmax,
            scale=args.scale,
            epsilon=args.epsilon,
            master_seed=args.seed,
            r_min=args.r_min,
            r_max=args.r_max,
            workers=args.workers,
            max_evaluations=args.max_evals,
            record_timing=args.timings,
        )
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = run(cfg)
    try:
        trials_path, summary_path = report.write(args.out)
    except OSError as exc:
        print(f"error: cannot write report to {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    counts = report.counts()
    print(f"{cfg.mode.value}: {counts['trials']} trials, error_detected={report.error_detected}, "
          f"{report.total_elapsed:.2f}s")
    print(f"wrote {trials_path} and {summary_path}")
    if counts.get("budget_exhausted"):
        print(f"warning: {counts['budget_exhausted']} trials exhausted the optimizer budget; "
              "raise --max-evals and re-run", file=sys.stderr)
    if report.error_detected:
        print("first failure: " + report.first_failure.reproduction(cfg), file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "solve":
        return cmd_solve(args)
    return cmd_simulate(args)


if __name__ == "__main__":
    sys.exit(main())
