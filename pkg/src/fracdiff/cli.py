"""
Command-line entry point.

    fracdiff coeffs --alpha 0.6 --n 4
    fracdiff solve --problem example1 --alpha 0.7 --nx 64 --nt 64 --out traj.csv
    fracdiff converge-time --problem example1 --alpha 0.6 --ref 1024 --nt 32,64,128,256 --out t1.csv
    fracdiff converge-space --problem example1 --alpha 0.6 --ref 1024 --nx 16,32,64,128 --out t2.csv
    fracdiff stability --qtau 0.7,1.2,2.5 --samples 720 --out stab.csv
    fracdiff table --name table1 --alpha 0.6 --desk --out t1.csv

Exit status: 0 on success, 2 for usage and validation errors, 3 when the
computation fails (non-convergence, overflow, singular factors).
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .coefficients import coeff_table
from .config import (
    BOUNDARY_TOLERANCE,
    DEFAULT_MAX_ITER,
    DEFAULT_QTAU,
    DEFAULT_THETA_SAMPLES,
    DEFAULT_TOL,
    JOBS_ENV_VAR,
    resolve_jobs,
)
from .errors import FracDiffError, NumericalError, ValidationError
from .harness import PRESETS, preset_study, refinement_study, run_preset
from .io import ResultWriter, read_problem_config
from .models import Axis, ConvergenceTable, FractionalOrder, Problem
from .problems import builtin_problem, problem_from_config, registry_listing
from .reports import Reporter
from .stability import boundary_curve, boundary_residual
from .stepper import integrate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    """Validated command-line settings. Nothing in a run is random."""

    subcommand: str
    problem: Optional[str] = None
    config_path: Optional[Path] = None
    alpha: Optional[float] = None
    nx: Tuple[int, ...] = ()
    nt: Tuple[int, ...] = ()
    ref: Optional[int] = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    out: Optional[Path] = None
    jobs: int = 1

    def validate(self) -> None:
        if self.alpha is not None:
            FractionalOrder.coerce(self.alpha)
        if not self.tol > 0:
            raise ValidationError(f"--tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError(f"--max-iter must be >= 1, got {self.max_iter}")
        if self.ref is not None and self.ref < 2:
            raise ValidationError(f"--ref must be >= 2, got {self.ref}")
        if self.out is not None and not self.out.parent.is_dir():
            raise ValidationError(f"output directory does not exist: {self.out.parent}")


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _float_list(text: str) -> Tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _registry_epilog() -> str:
    lines = ["registries:"]
    for kind, names in registry_listing().items():
        lines.append(f"  {kind}: {', '.join(names)}")
    lines.append(f"  table presets: {', '.join(sorted(PRESETS))}")
    lines.append("")
    lines.append(f"environment: {JOBS_ENV_VAR} sets the default for --jobs")
    lines.append("exit status: 0 success, 2 usage/validation error, 3 numerical failure")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdiff",
        description="L1 / IIF2 solver for two-sided space-fractional diffusion equations.",
        epilog=_registry_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="fixed-point tolerance (default 1e-12)")
        p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="fixed-point iteration cap (default 200)")

    def problem_flags(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--problem", help="builtin problem name (see registries below)")
        group.add_argument("--config", type=Path, help="JSON problem description")
        p.add_argument("--alpha", type=float, required=True, help="fractional order in (0.5, 1)")

    p = sub.add_parser("coeffs", help="print or write the L1 weights a_i, g_i")
    p.add_argument("--alpha", type=float, required=True, help="fractional order in (0.5, 1)")
    p.add_argument("--n", type=int, required=True, help="number of weights")
    p.add_argument("--out", type=Path, help="CSV path (default: standard output)")

    p = sub.add_parser("solve", help="integrate one problem and write the trajectory")
    problem_flags(p)
    p.add_argument("--nx", type=int, required=True, help="space intervals N")
    p.add_argument("--nt", type=int, required=True, help="time steps M")
    solver_flags(p)
    p.add_argument("--out", type=Path, required=True, help="trajectory CSV (t,x,u)")
    p.add_argument("--dump-operator", type=Path, help="also write the matrix A as CSV")

    for name, axis in (("converge-time", Axis.TIME), ("converge-space", Axis.SPACE)):
        varying = "nt" if axis is Axis.TIME else "nx"
        fixed = "nx" if axis is Axis.TIME else "nt"
        p = sub.add_parser(name, help=f"{axis.value} refinement study against a reference run")
        problem_flags(p)
        p.add_argument("--ref", type=int, required=True, help="reference resolution N = M")
        p.add_argument(f"--{varying}", type=_int_list, required=True, help="comma-separated coarse resolutions")
        p.add_argument(f"--{fixed}", type=int, help="fixed resolution (default: the reference)")
        solver_flags(p)
        p.add_argument("--jobs", type=int, help=f"worker threads for coarse rows (default ${JOBS_ENV_VAR} or 1)")
        p.add_argument("--out", type=Path, required=True, help="CSV table; a sibling .json holds the full report")
        p.set_defaults(axis=axis)

    p = sub.add_parser("table", help="run one column of a benchmark table preset")
    p.add_argument("--name", required=True, choices=sorted(PRESETS))
    p.add_argument("--alpha", type=float, required=True, help="fractional order in (0.5, 1)")
    p.add_argument("--desk", action="store_true", help="reference 512, coarse resolutions <= 128")
    solver_flags(p)
    p.add_argument("--jobs", type=int, help=f"worker threads for coarse rows (default ${JOBS_ENV_VAR} or 1)")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("stability", help="boundary curves of the IIF2 stability region")
    p.add_argument("--qtau", type=_float_list, default=DEFAULT_QTAU, help="comma-separated q*tau values")
    p.add_argument("--samples", type=int, default=DEFAULT_THETA_SAMPLES, help="theta samples per curve")
    p.add_argument("--out", type=Path, required=True, help="CSV (qtau,theta,lambda_r,lambda_i)")
    return parser


def _load_problem(args: argparse.Namespace) -> Problem:
    if getattr(args, "config", None) is not None:
        problem = problem_from_config(read_problem_config(args.config))
    else:
        problem = builtin_problem(args.problem)
    return problem.with_alpha(args.alpha)


def _to_config(args: argparse.Namespace) -> RunConfig:
    jobs = resolve_jobs(getattr(args, "jobs", None)) if hasattr(args, "jobs") else 1
    nx = getattr(args, "nx", None)
    nt = getattr(args, "nt", None)
    config = RunConfig(
        subcommand=args.subcommand,
        problem=getattr(args, "problem", None),
        config_path=getattr(args, "config", None),
        alpha=getattr(args, "alpha", None),
        nx=nx if isinstance(nx, tuple) else (() if nx is None else (nx,)),
        nt=nt if isinstance(nt, tuple) else (() if nt is None else (nt,)),
        ref=getattr(args, "ref", None),
        tol=getattr(args, "tol", DEFAULT_TOL),
        max_iter=getattr(args, "max_iter", DEFAULT_MAX_ITER),
        out=getattr(args, "out", None),
        jobs=jobs,
    )
    config.validate()
    return config


def _write_table(table: ConvergenceTable, out: Path) -> None:
    report = Reporter().table_report(table)
    json_path = ResultWriter().write_convergence(table, report, out)
    summary = report["summary"]
    logger.info(
        "%s %s alpha=%.2f: rates %s..%s (expected %.2f); report %s",
        table.axis.value,
        table.problem,
        table.alpha,
        summary["min_rate"],
        summary["max_rate"],
        summary["expected_order"],
        json_path,
    )


def _dispatch(args: argparse.Namespace, config: RunConfig) -> None:
    writer = ResultWriter()

    if args.subcommand == "coeffs":
        table = coeff_table(args.alpha, args.n)
        if config.out is None:
            sys.stdout.write(writer.coefficients_text(table))
        else:
            writer.write_coefficients(table, config.out)
        return

    if args.subcommand == "stability":
        curves = [boundary_curve(q, args.samples) for q in args.qtau]
        worst = max(boundary_residual(p) for c in curves for p in c.points)
        logger.info("max boundary residual %.3e over %d curves", worst, len(curves))
        if worst > BOUNDARY_TOLERANCE:
            raise NumericalError(
                f"stability boundary residual {worst:.3e} exceeds {BOUNDARY_TOLERANCE:g}"
            )
        writer.write_stability(curves, args.out)
        return

    if args.subcommand == "solve":
        problem = _load_problem(args)
        traj = integrate(problem, args.nx, args.nt, config.tol, config.max_iter)
        writer.write_solution(traj, args.out, traj.operator, args.dump_operator)
        return

    if args.subcommand == "table":
        preset = preset_study(args.name, desk=args.desk)
        table = run_preset(preset, args.alpha, config.tol, config.max_iter, config.jobs)
        _write_table(table, args.out)
        return

    # converge-time / converge-space
    problem = _load_problem(args)
    varying = args.nt if args.axis is Axis.TIME else args.nx
    fixed = args.nx if args.axis is Axis.TIME else args.nt
    table = refinement_study(
        problem,
        args.alpha,
        args.axis,
        fixed,
        varying,
        args.ref,
        args.ref,
        tol=config.tol,
        max_iter=config.max_iter,
        jobs=config.jobs,
    )
    _write_table(table, args.out)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one CLI invocation and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="[%(levelname)s] %(name)s: %(message)s",
    )

    try:
        config = _to_config(args)
        _dispatch(args, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracDiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
