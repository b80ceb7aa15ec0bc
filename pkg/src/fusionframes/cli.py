"""Command-line front end.

Commands:
    ff analyze <file>                    classification and bounds
    ff canonical-dual <file> [--weights ...]
    ff verify-dual <file> [--tol T]      certify the dual section
    ff optimal <file> --p {2,inf} --r N [solver flags]
    ff local-optimal <file> --p {2,inf} --r N [solver flags]
    ff reproduce <id>                    rerun a bundled worked example

Exit codes: 0 pass, 2 parse error, 3 certification failure, 4 solver
non-convergence.  FF_TOL overrides the default tolerance 1e-9.  Reports
go to stdout; ``--json PATH`` additionally writes the machine-readable
report, byte-identical for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .duality import canonical_dual, classify_q, is_q_dual
from .errors import (
    FusionFrameError,
    InvalidSpec,
    NonConvergence,
    NotADual,
    ParseError,
)
from .erasures import (
    ErasureReport,
    hierarchical_optimal,
    local_mse_optimal_system,
    local_worst_case_optimal_system,
    mse_optimal_dual,
    worst_case_optimal_dual,
)
from .minimax import SolverConfig
from .reproduce import EXAMPLE_IDS, reproduce
from .specio import Check, Report, file_digest, load_spec
from .systems import is_dual_system

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CERTIFICATION = 3
EXIT_NONCONVERGENCE = 4


def _default_tol() -> float:
    return float(os.environ.get("FF_TOL", "1e-9"))


def _solver_from_args(args) -> SolverConfig:
    return SolverConfig(
        max_iters=args.max_iters,
        step_scale=args.step_scale,
        tol=args.solver_tol,
        patience=args.patience,
        polish=not args.no_polish,
    )


def _emit(report: Report, json_path: str | None) -> None:
    print(report.human())
    if json_path:
        with open(json_path, "w", encoding="utf-8") as handle:
            handle.write(report.to_json())
            handle.write("\n")


def _pattern_table(report: ErasureReport) -> list:
    return [[pattern.as_key(), err] for pattern, err in report.per_pattern_errors]


def cmd_analyze(args) -> int:
    tol = args.tol
    spec = load_spec(args.file)
    ff = spec.fusion_frame()
    report = Report("analyze", file_digest(args.file))
    cls = ff.classify()
    report.payload["classification"] = cls.as_dict()
    report.payload["dims"] = list(ff.dims)
    report.payload["weights"] = [float(w) for w in ff.weights]
    if cls.is_fusion_frame:
        lo, hi = ff.fusion_bounds()
        report.payload["bounds"] = {"lower": lo, "upper": hi, "tol": cls.tol}
    report.add(Check.boolean("family is a fusion frame", cls.is_fusion_frame))
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def cmd_canonical_dual(args) -> int:
    tol = args.tol
    spec = load_spec(args.file)
    ff = spec.fusion_frame()
    v = np.asarray(args.weights, dtype=float) if args.weights else None
    pair = canonical_dual(ff, v, tol)
    report = Report("canonical-dual", file_digest(args.file))
    report.payload["residual"] = {"value": pair.residual, "tol": tol}
    report.payload["dual_dims"] = [s.dim for s in pair.dual.subspaces]
    report.payload["dual_weights"] = [float(w) for w in pair.dual.weights]
    report.payload["dual_bases"] = [s.basis for s in pair.dual.subspaces]
    report.payload["q_classification"] = classify_q(pair.q, tol).value
    report.add(Check.leq("duality residual", pair.residual, tol))
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def cmd_verify_dual(args) -> int:
    tol = args.tol
    spec = load_spec(args.file)
    ff = spec.fusion_frame()
    report = Report("verify-dual", file_digest(args.file))
    if spec.dual is None:
        raise InvalidSpec("verify-dual requires a dual section")
    if spec.dual.local_frames is not None and spec.local_frames is not None:
        ws = spec.system()
        vs = spec.dual_system()
        pair = is_dual_system(ws, vs, tol)
        report.payload["mode"] = "system"
    else:
        dual = spec.dual_fusion_frame()
        q = spec.dual_q(ff, dual)
        pair = is_q_dual(ff, dual, q, tol)
        report.payload["mode"] = "fusion-frame"
    report.payload["residual"] = {"value": pair.residual, "tol": tol}
    report.payload["q_classification"] = classify_q(pair.q, tol).value
    report.add(Check.leq("duality residual", pair.residual, tol))
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def _optimal_common(report: Report, result: ErasureReport, args) -> None:
    report.payload["p"] = "inf" if result.p == math.inf else result.p
    report.payload["aggregate_r1"] = result.aggregate
    report.payload["aggregate_by_r"] = {str(k): v
                                        for k, v in result.aggregate_by_r.items()}
    report.payload["error_table_r1"] = _pattern_table(result)
    report.payload["certificate"] = result.certificate.splitlines()
    if result.solver is not None:
        report.payload["solver"] = {
            "iterations": result.solver.iterations,
            "objective": result.solver.phi,
            "start_objective": result.solver.phi_start,
            "polished": result.solver.polished,
        }
    report.add(Check.leq("optimal dual residual",
                         result.optimal_dual.residual, args.tol))


def cmd_optimal(args) -> int:
    spec = load_spec(args.file)
    ff = spec.fusion_frame()
    report = Report(f"optimal p={args.p} r={args.r}", file_digest(args.file))
    if args.p == "2":
        result = mse_optimal_dual(ff, tol=args.tol)
    else:
        result = worst_case_optimal_dual(ff, solver=_solver_from_args(args),
                                         tol=args.tol)
    if args.r > 1:
        result = hierarchical_optimal(result, args.r, samples=args.samples)
    _optimal_common(report, result, args)
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def cmd_local_optimal(args) -> int:
    spec = load_spec(args.file)
    ws = spec.system()
    report = Report(f"local-optimal p={args.p} r={args.r}", file_digest(args.file))
    if args.p == "2":
        result = local_mse_optimal_system(ws, tol=args.tol)
    else:
        result = local_worst_case_optimal_system(ws, solver=_solver_from_args(args),
                                                 tol=args.tol)
    if args.r > 1:
        result = hierarchical_optimal(result, args.r, samples=args.samples)
    _optimal_common(report, result, args)
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def cmd_reproduce(args) -> int:
    report = reproduce(args.example_id, tol=args.tol)
    _emit(report, args.json)
    return EXIT_OK if report.ok else EXIT_CERTIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ff",
        description="Fusion frame analysis, duality certification, and "
                    "erasure-optimal dual solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_file=True):
        if needs_file:
            p.add_argument("file", help="JSON problem description")
        p.add_argument("--tol", type=float, default=_default_tol(),
                       help="certification tolerance (default FF_TOL or 1e-9)")
        p.add_argument("--json", metavar="PATH", default=None,
                       help="also write a machine-readable report")

    def solver_flags(p):
        p.add_argument("--max-iters", type=int, default=50000)
        p.add_argument("--step-scale", type=float, default=0.1)
        p.add_argument("--solver-tol", type=float, default=1e-10)
        p.add_argument("--patience", type=int, default=500)
        p.add_argument("--no-polish", action="store_true",
                       help="skip the smooth polish after subgradient descent")
        p.add_argument("--samples", type=int, default=10,
                       help="competitors per level for hierarchy checks")

    p = sub.add_parser("analyze", help="classification and bounds")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("canonical-dual", help="canonical dual and residual")
    common(p)
    p.add_argument("--weights", type=float, nargs="+", default=None,
                   help="dual weights (default: primal weights)")
    p.set_defaults(func=cmd_canonical_dual)

    p = sub.add_parser("verify-dual", help="certify the dual section")
    common(p)
    p.set_defaults(func=cmd_verify_dual)

    p = sub.add_parser("optimal", help="loss-optimal dual for subspace erasures")
    common(p)
    p.add_argument("--p", choices=["2", "inf"], required=True)
    p.add_argument("--r", type=int, default=1)
    solver_flags(p)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("local-optimal",
                       help="loss-optimal dual system for local-vector erasures")
    common(p)
    p.add_argument("--p", choices=["2", "inf"], required=True)
    p.add_argument("--r", type=int, default=1)
    solver_flags(p)
    p.set_defaults(func=cmd_local_optimal)

    p = sub.add_parser("reproduce", help="rerun a bundled worked example")
    p.add_argument("example_id", choices=list(EXAMPLE_IDS) + ["6.2", "6.3"])
    common(p, needs_file=False)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InvalidSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonConvergence as exc:
        print(f"error: solver did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except NotADual as exc:
        print(f"error: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except FusionFrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION


if __name__ == "__main__":
    sys.exit(main())
