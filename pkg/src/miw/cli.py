"""Command-line harness.

All subcommands are deterministic (no random state anywhere on these code
paths): identical invocations produce byte-identical output.  CSV output
starts with a provenance comment recording the tool version, subcommand,
and the full flag set; exit codes are 0 on success, 2 on domain errors, and
3 on numerical failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, config, coupling, radial, rates, stein, wasser
from .errors import ConvergenceError, DomainError, MiwError

_CORRECTIONS = {
    "none": rates.Correction.NONE,
    "sqrt-log": rates.Correction.SQRT_LOG,
    "log6": rates.Correction.LOG_POW6,
}


def _provenance(args: argparse.Namespace, skip=("func", "out", "format")) -> str:
    flags = sorted(
        f"{k}={v}" for k, v in vars(args).items() if k not in skip and v is not None
    )
    return f"miw {__version__} {args.subcommand} " + " ".join(flags)


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def _solution_payload(sol, args) -> str:
    if args.format == "json":
        meta = {"meta": _provenance(args)}
        body = json.loads(radial.solution_to_json(sol))
        return json.dumps({**meta, **body}) + "\n"
    return f"# {_provenance(args)}\n" + radial.solution_to_csv(sol)


def _cmd_radial(args) -> None:
    sol = radial.solve_ground_state(args.k, args.n, args.tol)
    _emit(_solution_payload(sol, args), args.out)


def _cmd_kernel(args) -> None:
    sol = radial.kernel_matched_solve(args.k, args.n, args.tol)
    _emit(_solution_payload(sol, args), args.out)


def _cmd_bound(args) -> None:
    report, cb, iml = rates.evaluate_bound_report(
        args.k, args.n, args.tol, exact=args.exact, with_coupling=args.coupling
    )
    if args.format == "json":
        payload = json.loads(report.to_json())
        payload["meta"] = _provenance(args)
        if args.coupling:
            payload["coupling_bound"] = cb
            payload["inverse_moment_l1"] = iml
        if args.exact:
            payload["dominance_ok"] = bool(report.exact_w1 <= report.total_bound)
        _emit(json.dumps(payload) + "\n", args.out)
        return
    header = stein.BoundReport.CSV_HEADER
    row = report.to_csv_row()
    if args.coupling:
        header += ",coupling_bound,inverse_moment_l1"
        row += f",{cb!r},{iml!r}"
    if args.exact:
        header += ",dominance_ok"
        row += f",{report.exact_w1 <= report.total_bound}"
    _emit(f"# {_provenance(args)}\n{header}\n{row}\n", args.out)


def _cmd_wasserstein(args) -> None:
    sol = radial.solve_ground_state(args.k, args.n, args.tol)
    value = wasser.w1_empirical_vs_cdf(sol.points, stein.TiltedGaussianTarget(args.k))
    if args.format == "json":
        _emit(
            json.dumps(
                {"meta": _provenance(args), "k": args.k, "N": args.n, "w1": value}
            )
            + "\n",
            args.out,
        )
        return
    _emit(f"# {_provenance(args)}\nk,N,w1\n{args.k},{args.n},{value!r}\n", args.out)


def _cmd_config(args) -> None:
    if args.quanta:
        quanta = tuple(int(q) for q in args.quanta.split(","))
        cfg = config.build_excited_state(args.n, args.d, quanta, args.tol)
    else:
        cfg = config.build_ground_state(args.n, args.d, args.tol)
    if args.format == "json":
        payload = json.loads(config.configuration_to_json(cfg))
        payload["meta"] = _provenance(args)
        payload["hamiltonian"] = config.hamiltonian(cfg)
        _emit(json.dumps(payload) + "\n", args.out)
        return
    _emit(f"# {_provenance(args)}\n" + config.configuration_to_csv(cfg), args.out)


def _parse_grid(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError("--n-grid takes start:stop:step")
    start, stop, step = (int(p) for p in parts)
    if step <= 0 or stop < start:
        raise DomainError("--n-grid needs start <= stop and step > 0")
    return list(range(start, stop + 1, step))


def _cmd_rates(args) -> None:
    grid = _parse_grid(args.n_grid)
    fit = rates.rate_study(
        args.k,
        grid,
        _CORRECTIONS[args.correction],
        metric=args.metric,
        tol=args.tol,
        jobs=args.jobs,
    )
    if args.format == "json":
        payload = fit.to_json_dict()
        payload["meta"] = _provenance(args)
        payload["k"] = args.k
        payload["metric"] = args.metric
        _emit(json.dumps(payload) + "\n", args.out)
        return
    lines = [f"# {_provenance(args)}"]
    lines.append(
        f"# exponent={fit.exponent!r} intercept={fit.intercept!r} r_squared={fit.r_squared!r}"
    )
    lines.append("N,value")
    lines.extend(f"{n},{v!r}" for n, v in zip(fit.n_grid, fit.values))
    _emit("\n".join(lines) + "\n", args.out)


def _cmd_coupling(args) -> None:
    sol = radial.solve_ground_state(args.k, args.n, args.tol)
    bt = coupling.BiasTransform(sol)
    bound = coupling.coupling_wasserstein_bound(bt)
    gap = coupling.coupled_gap_bound(bt)
    img = coupling.inverse_moment_gap(bt, min(args.l, args.k))
    if args.format == "json":
        _emit(
            json.dumps(
                {
                    "meta": _provenance(args),
                    "k": args.k,
                    "N": args.n,
                    "coupling_bound": bound,
                    "coupled_gap": gap,
                    "gap_envelope": coupling.telescoped_gap_envelope(bt),
                    "inverse_moment_l": min(args.l, args.k),
                    "inverse_moment_exact": img.exact,
                    "inverse_moment_envelope": img.envelope,
                }
            )
            + "\n",
            args.out,
        )
        return
    _emit(
        f"# {_provenance(args)}\n"
        "k,N,coupling_bound,coupled_gap,gap_envelope,inverse_moment_exact,inverse_moment_envelope\n"
        f"{args.k},{args.n},{bound!r},{gap!r},"
        f"{coupling.telescoped_gap_envelope(bt)!r},{img.exact!r},{img.envelope!r}\n",
        args.out,
    )


def _add_common(p: argparse.ArgumentParser, tol_default: float = radial.DEFAULT_TOL) -> None:
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float, default=tol_default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miw",
        description=(
            "Interacting-worlds oscillator discretizations: radial solutions, "
            "d-dimensional configurations, Wasserstein bounds and rates."
        ),
    )
    parser.add_argument("--version", action="version", version=f"miw {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("radial", help="solve the radial recursion")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_radial)

    p = sub.add_parser("kernel", help="solve the kernel-matched recursion")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p, tol_default=radial.DEFAULT_MATCHED_TOL)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("bound", help="evaluate the Wasserstein upper bound")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="also compute the exact distance")
    p.add_argument("--coupling", action="store_true", help="append coupling-bound columns")
    _add_common(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("wasserstein", help="exact empirical Wasserstein distance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_wasserstein)

    p = sub.add_parser("config", help="build a d-dimensional configuration")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quanta", default=None, help="comma-separated quantum numbers")
    _add_common(p)
    p.set_defaults(func=_cmd_config)

    p = sub.add_parser("rates", help="sweep an N grid and fit a log-log rate")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-grid", required=True, help="start:stop:step")
    p.add_argument("--correction", choices=tuple(_CORRECTIONS), default="none")
    p.add_argument("--metric", choices=("w1", "bound", "xm", "coupling"), default="w1")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: cpu count)")
    _add_common(p)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser("coupling", help="coupling bound and inverse-moment gaps")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, default=1, help="inverse-moment order")
    _add_common(p)
    p.set_defaults(func=_cmd_coupling)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConvergenceError as exc:
        print(f"miw: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (DomainError, MiwError) as exc:
        print(f"miw: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"miw: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
