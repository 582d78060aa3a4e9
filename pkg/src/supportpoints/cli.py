"""Command-line interface.

Subcommands
-----------
generate   support points for a named distribution (resampling solver)
compact    support points for a sample file such as an MCMC chain
energy     energy statistics between a point file and a sample file
benchmark  integration-error comparison against Monte Carlo

Distribution strings::

    normal(0,1):exp(1)        product of the listed marginals
    iid:beta(2,4):2           p copies of one marginal
    borehole                  the 8-input borehole law

Laws: normal(mean,sd), exp(rate), beta(a,b), uniform(lo,hi),
lognormal(meanlog,sdlog).

Exit codes: 0 success, 2 input error, 3 solver failure, 4 degenerate data.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

import numpy as np

from . import bench
from .dist import (DistributionSpec, Marginal, borehole_spec, fit_standardizer,
                   load_samples, make_rng, write_points)
from .energy import energy_statistic, full_energy_distance
from .exceptions import (DegenerateDimensionError, InvalidInputError, ParseError,
                         SingularityError)
from .solver import SolverConfig, Termination, sp_ccp, sp_sccp

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_DEGENERATE = 0, 2, 3, 4

_LAW_RE = re.compile(r"^\s*([a-z]+)\s*\(([^()]*)\)\s*$")


def _parse_marginal(text: str) -> Marginal:
    m = _LAW_RE.match(text)
    if not m:
        raise InvalidInputError(f"cannot parse law {text!r}")
    try:
        params = tuple(float(v) for v in m.group(2).split(",") if v.strip())
    except ValueError:
        raise InvalidInputError(f"non-numeric parameter in {text!r}") from None
    return Marginal(m.group(1), params)


def parse_distribution(text: str) -> DistributionSpec:
    """Parse a distribution string (see module docstring)."""
    text = text.strip()
    if text == "borehole":
        return borehole_spec()
    parts = text.split(":")
    if parts[0] == "iid":
        if len(parts) != 3:
            raise InvalidInputError(f"expected iid:law(params):p, got {text!r}")
        try:
            p = int(parts[2])
        except ValueError:
            raise InvalidInputError(f"bad dimension in {text!r}") from None
        return DistributionSpec.iid(_parse_marginal(parts[1]), p)
    return DistributionSpec(tuple(_parse_marginal(s) for s in parts))


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _int_list(text):
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("need positive integers")
    return vals


def _solver_flags(p, resample=True):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    p.add_argument("--max-iters", type=_positive_int, default=500)
    p.add_argument("--move-tol", type=_positive_float, default=None,
                   help="max point movement for convergence (default 1e-6 x sample scale)")
    p.add_argument("--distinct-tol", type=float, default=0.0)
    if resample:
        p.add_argument("--N", dest="resample_size", type=_positive_int, default=10_000,
                       help="draws per iteration")


def _config(args) -> SolverConfig:
    return SolverConfig(
        resample_size=getattr(args, "resample_size", 10_000),
        max_iters=args.max_iters,
        move_tol=args.move_tol,
        distinct_tol=args.distinct_tol,
        seed=args.seed,
        threads=args.threads,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="supportpoints",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="support points for a distribution")
    g.add_argument("--dist", required=True)
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--out", default="-")
    _solver_flags(g)

    c = sub.add_parser("compact", help="compact a sample file into n support points")
    c.add_argument("--input", required=True)
    c.add_argument("--n", type=_positive_int, required=True)
    c.add_argument("--standardize", action="store_true",
                   help="rescale each column to unit variance before solving")
    c.add_argument("--header", action="store_true")
    c.add_argument("--out", default="-")
    _solver_flags(c, resample=False)

    e = sub.add_parser("energy", help="energy statistics between two files")
    e.add_argument("--points", required=True)
    e.add_argument("--sample", required=True)
    e.add_argument("--header", action="store_true")
    e.add_argument("--baseline", action="store_true",
                   help="also report a random subsample of the sample file of equal size")
    e.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("benchmark", help="integration error vs Monte Carlo")
    b.add_argument("--dist", required=True)
    b.add_argument("--integrand", choices=sorted(bench.INTEGRANDS), required=True)
    b.add_argument("--ngrid", type=_int_list, required=True)
    b.add_argument("--trials", type=_positive_int, default=100)
    b.add_argument("--external", action="append", default=[])
    b.add_argument("--out-dir", default=".")
    b.add_argument("--log", action="store_true", help="summaries of log10 errors")
    b.add_argument("--reference-draws", type=_positive_int, default=10**7,
                   help="draws for the reference integral when none is stored")
    _solver_flags(b)
    return parser


def _write(out, x):
    if out == "-":
        for row in x:
            sys.stdout.write(",".join(f"{v:.17g}" for v in row) + "\n")
    else:
        write_points(out, x)


def _finish(x, report, out):
    print(report.summary(), file=sys.stderr)
    if report.termination is Termination.DISTINCTNESS_VIOLATION:
        print("error: point set could not be kept pairwise distinct", file=sys.stderr)
        return EXIT_SOLVER
    _write(out, x)
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = parse_distribution(args.dist)
    x, report = sp_sccp(spec, args.n, _config(args))
    return _finish(x, report, args.out)


def cmd_compact(args) -> int:
    y = np.array(load_samples(args.input, header=args.header).draws)
    std = None
    if args.standardize:
        std = fit_standardizer(y)
        y = std.apply(y)
    x, report = sp_ccp(y, args.n, _config(args))
    if std is not None:
        x = std.invert(x)
    return _finish(x, report, args.out)


def _print_energy(label, xs, ys):
    st = energy_statistic(xs, ys)
    full = full_energy_distance(xs, ys)
    print(f"{label}energy_statistic={st.value:.17g}")
    print(f"{label}full_energy_distance={full.value:.17g}")
    print(f"{label}cross_term={full.cross_term:.17g}")
    print(f"{label}self_term_points={full.self_term_x:.17g}")
    print(f"{label}self_term_sample={full.self_term_y:.17g}")


def cmd_energy(args) -> int:
    x = load_samples(args.points, header=args.header).draws
    y = load_samples(args.sample, header=args.header).draws
    if x.shape[1] != y.shape[1]:
        raise InvalidInputError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    _print_energy("", x, y)
    if args.baseline:
        rng = make_rng([args.seed, 99])
        n = min(x.shape[0], y.shape[0])
        sub = y[rng.choice(y.shape[0], size=n, replace=False)]
        _print_energy("baseline_", sub, y)
    return EXIT_OK


def cmd_benchmark(args) -> int:
    spec = parse_distribution(args.dist)
    g = bench.INTEGRANDS[args.integrand](spec)
    try:
        ref = bench.load_reference(args.integrand, spec)
    except KeyError:
        print(f"computing reference integral with {args.reference_draws} draws", file=sys.stderr)
        ref = bench.compute_reference(g, spec, args.reference_draws)
    res = bench.run_comparison(spec, g, args.ngrid, args.trials, args.seed, ref,
                               _config(args), args.external, args.log)
    per, summ = bench.write_comparison(res, args.out_dir)
    print(f"reference={ref.value:.10g} se={ref.se:.3g}", file=sys.stderr)
    print(f"wrote {per} and {summ}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "compact": cmd_compact,
            "energy": cmd_energy, "benchmark": cmd_benchmark}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DegenerateDimensionError as exc:
        print(f"error: column {exc.dimension} has zero variance", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InvalidInputError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
