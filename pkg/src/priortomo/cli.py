"""
Command-line entry point.

Subcommands::

    build        construct a scheme (rank-constrained POVM, anti-diagonal observables, ...)
    stats        statistics of a state under a scheme
    verify       informational-completeness verdict for a scheme and a premise
    reconstruct  recover a state from statistics
    bounds       bounds on the minimal number of observables
    mane         random-observable injectivity experiment
    roman        Roman surface point cloud (CSV)

Exit codes: 0 success, 1 usage or input error, 2 verdict Refuted/SampledFail,
3 numerical failure (no convergence, inconsistent data).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .bounds import bound_report, pure_bound_table
from .core import DimensionError, as_state, orthogonal_complement
from .opsys import ObservableSet, Povm, povm_from_observables, povm_from_operator_system, statistics
from .premise import Premise
from .pure import NotPureStateError, james_observables, real_projective_scheme, reconstruct_pure_state, roman_surface_points
from .rankcon import build_rank_witness_subspace, sample_min_rank
from .recon_rank import reconstruct_rank_r
from .verify import complement_of_scheme, mane_experiment, rank_ic_criterion, sampled_separation

EXIT_OK, EXIT_USAGE, EXIT_VERDICT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _premise(text: str, dim: int | None) -> Premise:
    sigma = None
    head, _, arg = text.partition(":")
    if head == "depol":
        if not arg:
            raise UsageError("depol premise needs a state file: depol:<file>")
        sigma = jsonio.matrix_from_json(jsonio.load(arg))
    return Premise.parse(text, dim, sigma)


def _load_scheme(path: str) -> Povm | ObservableSet:
    return jsonio.scheme_from_json(jsonio.load(path))


# -- subcommands ---------------------------------------------------------------


def cmd_build(args) -> int:
    prem = _premise(args.premise, args.dim)
    d = prem.dim
    if prem.kind == "rank":
        w = build_rank_witness_subspace(d, prem.rank)
        povm = povm_from_operator_system(orthogonal_complement(w.subspace))
        report = {
            "dim": d,
            "rank_bound": prem.rank,
            "witness_dim": w.dim,
            "n_outcomes": povm.n_outcomes,
            "sum_residual": povm.sum_residual(),
            "min_eigenvalue": povm.min_eigenvalue(),
            "sampled_min_rank": sample_min_rank(w, args.samples, args.seed),
            "samples": args.samples,
        }
        doc = jsonio.scheme_to_json(povm, report=report)
    elif prem.kind == "pure":
        obs = james_observables(d).observables
        scheme = povm_from_observables(obs) if args.scheme == "james-povm" else obs
        doc = jsonio.scheme_to_json(scheme)
    elif prem.kind == "realpure":
        if d != 3:
            raise UsageError("the real projective scheme is defined for d = 3")
        doc = jsonio.scheme_to_json(real_projective_scheme())
    else:
        raise UsageError(f"no construction for premise {args.premise!r}")
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    scheme = _load_scheme(args.scheme)
    obj = jsonio.load(args.state)
    if "amplitudes" in obj:
        x = jsonio.amplitudes_from_json(obj)
        rho = np.outer(x, x.conj()) / np.vdot(x, x).real
    else:
        rho = as_state(jsonio.matrix_from_json(obj))
    _emit(jsonio.dumps(jsonio.vector_to_json(statistics(scheme, rho))), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    scheme = _load_scheme(args.scheme)
    d = scheme.dim_space
    prem = _premise(args.premise, d)
    if prem.dim != d:
        raise DimensionError(f"premise dimension {prem.dim} != scheme dimension {d}")
    if prem.kind in ("pure", "rank"):
        r = 1 if prem.kind == "pure" else prem.rank
        rep = rank_ic_criterion(complement_of_scheme(scheme), r, args.trials or 64, args.seed)
    else:
        rep = sampled_separation(scheme, prem, args.trials or 10_000, args.seed)
    _emit(jsonio.dumps(rep.to_dict()), args.out)
    return EXIT_OK if rep.ok else EXIT_VERDICT


def cmd_reconstruct(args) -> int:
    values = jsonio.vector_from_json(jsonio.load(args.stats))
    if args.scheme == "james":
        x = reconstruct_pure_state(values)
        _emit(jsonio.dumps(jsonio.amplitudes_to_json(x)), args.out)
        return EXIT_OK
    if args.rank is None:
        raise UsageError("--rank is required unless --scheme james")
    scheme = _load_scheme(args.scheme)
    res = reconstruct_rank_r(scheme, values, args.rank, max_starts=args.starts, seed=args.seed)
    doc = {
        "state": jsonio.matrix_to_json(res.state),
        "residual": res.residual,
        "converged": res.converged,
        "starts_used": res.starts_used,
    }
    _emit(jsonio.dumps(doc), args.out)
    return EXIT_OK if res.converged else EXIT_NUMERIC


def _format_table(reports) -> str:
    lines = [f"{'d':>3} {'lower':>6} {'upper':>6} {'exact':>6}"]
    for r in reports:
        ex = "-" if r.exact is None else str(r.exact)
        lines.append(f"{r.d:>3} {r.lower:>6} {r.upper:>6} {ex:>6}")
    return "\n".join(lines)


def cmd_bounds(args) -> int:
    if args.dmax is not None:
        if args.premise != "pure":
            raise UsageError("--dmax tables are available for the pure premise only")
        reports = pure_bound_table(args.dmax)
        text = jsonio.dumps([r.to_dict() for r in reports]) if args.json else _format_table(reports)
    else:
        if args.dim is None:
            raise UsageError("give --dmax for a table or --dim for a single report")
        rep = bound_report(_premise(args.premise, args.dim))
        text = jsonio.dumps(rep.to_dict()) if args.json else _format_table([rep])
    _emit(text, args.out)
    return EXIT_OK


def cmd_mane(args) -> int:
    prem = _premise(args.premise, args.dim)
    rep = mane_experiment(prem, args.m, args.pairs, args.seed)
    _emit(jsonio.dumps(rep.to_dict()), args.out)
    return EXIT_OK if rep.ok else EXIT_VERDICT


def cmd_roman(args) -> int:
    _emit(jsonio.points_to_csv(roman_surface_points(args.n)), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="priortomo", description="Measurement schemes for quantum states with prior information.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    premise_help = "pure | realpure | rank:<r> | grassmann:<r> | depol:<statefile>"

    b = sub.add_parser("build", help="construct a measurement scheme")
    b.add_argument("--premise", required=True, help=premise_help)
    b.add_argument("--dim", type=_positive, required=True)
    b.add_argument("--scheme", default="james", choices=["james", "james-povm"], help="pure-state scheme variant")
    b.add_argument("--samples", type=_positive, default=1000, help="random combinations for the rank report")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    s = sub.add_parser("stats", help="statistics of a state (matrix or amplitude JSON)")
    s.add_argument("--scheme", required=True)
    s.add_argument("--state", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)

    v = sub.add_parser("verify", help="informational-completeness verdict")
    v.add_argument("--scheme", required=True)
    v.add_argument("--premise", required=True, help=premise_help)
    v.add_argument("--trials", type=_positive, help="search starts (pure/rank) or sampled pairs (others)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reconstruct", help="recover a state from statistics")
    r.add_argument("--scheme", required=True, help="scheme JSON file, or 'james' for anti-diagonal expectations")
    r.add_argument("--stats", required=True, help='JSON {"values": [...]}')
    r.add_argument("--rank", type=_positive)
    r.add_argument("--starts", type=_positive, default=16)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reconstruct)

    bd = sub.add_parser("bounds", help="bounds on the minimal number of observables")
    bd.add_argument("--premise", default="pure", help=premise_help)
    bd.add_argument("--dmax", type=_positive)
    bd.add_argument("--dim", type=_positive)
    bd.add_argument("--json", action="store_true")
    bd.add_argument("--out")
    bd.set_defaults(func=cmd_bounds)

    m = sub.add_parser("mane", help="random-observable injectivity experiment")
    m.add_argument("--premise", required=True, help=premise_help)
    m.add_argument("--dim", type=_positive)
    m.add_argument("--m", type=_positive, required=True, help="number of random observables")
    m.add_argument("--pairs", type=_positive, default=10_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")
    m.set_defaults(func=cmd_mane)

    rm = sub.add_parser("roman", help="Roman surface point cloud as CSV")
    rm.add_argument("--n", type=_positive, required=True)
    rm.add_argument("--out")
    rm.set_defaults(func=cmd_roman)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NotPureStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
