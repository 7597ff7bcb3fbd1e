"""Command-line front end.

Subcommands: spectrum, domains, metric, islands, ep, validate.  Models come
from the built-in registry (--model) or a YAML document (--config).  All
numeric output is written as deterministic CSV bundles; --svg adds a static
plot.  Exit codes: 0 success, 2 usage error, 3 validity-range error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

import numpy as np

from .custom import load_custom_model
from .domains import domain_report, reality_islands, reality_profile
from .errors import (
    InvalidSpecError,
    ModelDomainError,
    ModelFileError,
    NumericalError,
)
from .metrics import (
    MetricCandidate,
    MetricProvenance,
    MetricSection,
    positivity_interval,
    reference_metric_ec4,
    reference_metric_ec4_strong,
)
from .models import Model, get_family, model_names
from .report import ReportBundle, Table
from .spectra import eigenvalues, matching_distance, sweep_eigenvalues
from .svgplot import LinePlot
from .tolerances import EPS_REAL
from .lattice import is_pt_symmetric

try:
    from importlib.metadata import PackageNotFoundError, version

    _VERSION = version("ptlattice")
except PackageNotFoundError:  # running from a source tree
    _VERSION = "unknown"


def _resolve_family(args):
    if bool(args.model) == bool(args.config):
        raise InvalidSpecError("give exactly one of --model or --config")
    if args.model:
        try:
            model = Model(args.model)
        except ValueError:
            raise InvalidSpecError(
                f"unknown model {args.model!r}; choose from: "
                + ", ".join(model_names())
            ) from None
        return get_family(model)
    return load_custom_model(args.config)


def _check_range(args) -> None:
    if not args.t_min < args.t_max:
        raise InvalidSpecError(
            f"need --t-min < --t-max, got [{args.t_min}, {args.t_max}]"
        )


def _new_bundle(args, family, command: str) -> ReportBundle:
    bundle = ReportBundle()
    bundle.add_header("command", command)
    bundle.add_header("version", _VERSION)
    bundle.add_header("model", family.name)
    bundle.add_header("n", family.n)
    bundle.add_header("topology", family.topology.value)
    bundle.add_header("t_min", float(args.t_min))
    bundle.add_header("t_max", float(args.t_max))
    if getattr(args, "steps", None) is not None:
        bundle.add_header("steps", args.steps)
    if hasattr(args, "eps_real"):
        bundle.add_header("eps_real", float(args.eps_real))
    if hasattr(args, "tol"):
        bundle.add_header("tol", float(args.tol))
    if args.stamp:
        bundle.add_header(
            "generated", datetime.now(timezone.utc).isoformat(timespec="seconds")
        )
    return bundle


def _emit(args, bundle: ReportBundle) -> None:
    text = bundle.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(args) -> int:
    family = _resolve_family(args)
    _check_range(args)
    family.check_validity(args.t_min)
    family.check_validity(args.t_max)
    grid = np.linspace(args.t_min, args.t_max, args.steps)
    rows = sweep_eigenvalues(family.matrix, grid)
    n = family.n

    bundle = _new_bundle(args, family, "spectrum")
    columns = (
        ["t"]
        + [f"re_{k + 1}" for k in range(n)]
        + [f"im_{k + 1}" for k in range(n)]
    )
    table_rows = [
        [float(t), *row.real.tolist(), *row.imag.tolist()]
        for t, row in zip(grid, rows)
    ]
    bundle.add_table(Table(name="spectrum", columns=columns, rows=table_rows))
    _emit(args, bundle)

    if args.svg:
        plot = LinePlot(
            title=f"{family.name}: eigenvalues vs t",
            x_label="t",
            y_label="E",
        )
        for k in range(n):
            plot.add_curve(
                grid, rows[:, k].real, label="Re E" if k == 0 else ""
            )
        for k in range(n):
            plot.add_curve(
                grid, rows[:, k].imag, label="Im E" if k == 0 else "", dashed=True
            )
        plot.write(args.svg)
    return 0


def cmd_domains(args) -> int:
    family = _resolve_family(args)
    _check_range(args)
    report = domain_report(
        family,
        args.t_min,
        args.t_max,
        coarse_steps=args.steps,
        tol=args.tol,
        eps_real=args.eps_real,
    )
    bundle = _new_bundle(args, family, "domains")
    bundle.add_table(
        Table(
            name="intervals",
            columns=("lo", "hi", "count_real", "boundary_tol"),
            rows=[
                (lo, hi, count, report.boundary_tol)
                for lo, hi, count in report.intervals
            ],
        )
    )
    bundle.add_table(
        Table(
            name="ep_markers",
            columns=("t_star", "order", "kind", "residual"),
            rows=[
                (ep.t_star, ep.order, ep.kind.value, ep.residual)
                for ep in report.eps
            ],
        )
    )
    _emit(args, bundle)

    if args.svg:
        steps = args.steps if args.steps is not None else 801
        grid = np.linspace(args.t_min, args.t_max, steps)
        profile = reality_profile(family, grid, eps_real=args.eps_real)
        plot = LinePlot(
            title=f"{family.name}: real eigenvalue count vs t",
            x_label="t",
            y_label="count",
        )
        plot.add_curve(profile.grid, profile.counts, label="real count")
        plot.write(args.svg)
    return 0


def _metric_candidate(args, family) -> MetricCandidate:
    reference = {
        Model.EC4.value: reference_metric_ec4,
        Model.EC4_STRONG_BOND.value: reference_metric_ec4_strong,
    }
    if not args.track and family.name in reference:
        return reference[family.name](0.0)
    if not args.track and family.name != Model.EC4_RECOUPLED.value:
        raise InvalidSpecError(
            f"model {family.name!r} has no closed-form metric family; "
            "pass --track to follow a kernel section numerically"
        )
    if family.contains(0.0) and args.t_min < 0.0 < args.t_max:
        seed = 0.0
    else:
        seed = (args.t_min + args.t_max) / 2
    section = MetricSection(family, t_seed=seed)
    return MetricCandidate(
        provenance=MetricProvenance.BASIS_COMBINATION, family=section.value
    )


def cmd_metric(args) -> int:
    family = _resolve_family(args)
    _check_range(args)
    family.check_validity(args.t_min)
    family.check_validity(args.t_max)
    candidate = _metric_candidate(args, family)
    report = positivity_interval(
        candidate, args.t_min, args.t_max, args.tol, coarse_steps=args.steps
    )

    bundle = _new_bundle(args, family, "metric")
    bundle.add_header("metric_provenance", candidate.provenance.value)
    if report.interval is not None:
        bundle.add_header("interval_lo", report.interval[0])
        bundle.add_header("interval_hi", report.interval[1])
        interval_rows = [report.interval]
    else:
        print(
            "notice: metric not positive definite anywhere in the scanned range",
            file=sys.stderr,
        )
        interval_rows = []
    bundle.add_table(
        Table(name="positivity_interval", columns=("lo", "hi"), rows=interval_rows)
    )
    bundle.add_table(
        Table(
            name="min_eig",
            columns=("t", "min_eig"),
            rows=[tuple(row) for row in report.min_eig_samples],
        )
    )
    _emit(args, bundle)

    if args.svg:
        plot = LinePlot(
            title=f"{family.name}: metric minimum eigenvalue vs t",
            x_label="t",
            y_label="min eig",
        )
        plot.add_curve(
            report.min_eig_samples[:, 0],
            report.min_eig_samples[:, 1],
            label="min eig",
        )
        plot.write(args.svg)
    return 0


def cmd_islands(args) -> int:
    family = _resolve_family(args)
    _check_range(args)
    islands = reality_islands(
        family,
        args.t_min,
        args.t_max,
        args.k,
        coarse_steps=args.steps,
        tol=args.tol,
        eps_real=args.eps_real,
    )
    steps = args.steps
    if steps is None:
        steps = max(2, int(np.ceil((args.t_max - args.t_min) * 2001)) + 1)
    spacing = (args.t_max - args.t_min) / (steps - 1)
    for lo, hi in islands:
        if hi - lo < spacing:
            print(
                f"warning: island ({lo:.6g}, {hi:.6g}) is narrower than the "
                "scan resolution; rerun with more --steps to confirm",
                file=sys.stderr,
            )
    if not islands:
        print(
            f"notice: no interval with exactly {args.k} real eigenvalues found",
            file=sys.stderr,
        )
    bundle = _new_bundle(args, family, "islands")
    bundle.add_header("k", args.k)
    bundle.add_table(
        Table(
            name="islands",
            columns=("lo", "hi", "count_real"),
            rows=[(lo, hi, args.k) for lo, hi in islands],
        )
    )
    _emit(args, bundle)
    return 0


def cmd_ep(args) -> int:
    family = _resolve_family(args)
    _check_range(args)
    report = domain_report(
        family,
        args.t_min,
        args.t_max,
        coarse_steps=args.steps,
        tol=args.tol,
        eps_real=args.eps_real,
    )
    if not report.eps:
        print(
            "notice: no exceptional point found in the scanned range",
            file=sys.stderr,
        )
    bundle = _new_bundle(args, family, "ep")
    bundle.add_table(
        Table(
            name="eps",
            columns=("t_star", "order", "kind", "residual"),
            rows=[
                (ep.t_star, ep.order, ep.kind.value, ep.residual)
                for ep in report.eps
            ],
        )
    )
    _emit(args, bundle)
    return 0


def cmd_validate(args) -> int:
    from .charpoly import MAX_ORACLE_N, eigenvalues_charpoly_oracle
    from .errors import ConsistencyError

    family = _resolve_family(args)
    _check_range(args)
    family.check_validity(args.t_min)
    family.check_validity(args.t_max)
    sample_ts = np.linspace(args.t_min, args.t_max, 11)
    checks = []

    for t in sample_ts:
        h = family.matrix(t)
        if not is_pt_symmetric(h):
            raise ConsistencyError(
                f"PT structure violated at t={t!r} for model {family.name}"
            )
    checks.append(("pt-structure", "ok", f"{len(sample_ts)} sample points"))

    for t in sample_ts:
        eigenvalues(family.matrix(t))  # conjugate closure + trace gates inside
    checks.append(("conjugate-closure", "ok", f"{len(sample_ts)} sample points"))

    if family.n <= MAX_ORACLE_N:
        worst = 0.0
        for t in sample_ts:
            h = family.matrix(t)
            scale = max(1.0, float(np.linalg.norm(h)))
            dist = matching_distance(
                eigenvalues(h).values, eigenvalues_charpoly_oracle(h).values
            )
            worst = max(worst, dist / scale)
            if dist > 1e-8 * scale:
                raise ConsistencyError(
                    f"eigensolver disagrees with the characteristic-polynomial "
                    f"oracle at t={t!r}: distance {dist:.3e}"
                )
        checks.append(("oracle-agreement", "ok", f"worst relative distance {worst:.3e}"))
    else:
        checks.append(
            ("oracle-agreement", "skipped", f"n={family.n} above oracle limit")
        )

    for name, status, detail in checks:
        print(f"{name}: {status} ({detail})")
    if args.out:
        bundle = _new_bundle(args, family, "validate")
        bundle.add_table(
            Table(name="checks", columns=("check", "status", "detail"), rows=checks)
        )
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(bundle.to_csv())
    return 0


def _add_common(sub: argparse.ArgumentParser, *, steps_default) -> None:
    sub.add_argument("--model", help="registry model name")
    sub.add_argument("--config", help="path to a YAML model document")
    sub.add_argument("--t-min", type=float, required=True, dest="t_min")
    sub.add_argument("--t-max", type=float, required=True, dest="t_max")
    sub.add_argument(
        "--steps",
        type=int,
        default=steps_default,
        help="grid points (default: %(default)s; domains/islands/ep default "
        "to an automatic density when omitted)",
    )
    sub.add_argument("--eps-real", type=float, default=EPS_REAL, dest="eps_real")
    sub.add_argument("--tol", type=float, default=1e-10)
    sub.add_argument("--out", help="write the CSV bundle here instead of stdout")
    sub.add_argument("--svg", help="also write an SVG plot to this path")
    sub.add_argument(
        "--stamp",
        action="store_true",
        help="include a generation timestamp (breaks byte-identical reruns)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptlattice",
        description=(
            "Spectra, reality domains, exceptional points, and metric "
            "operators of finite PT-symmetric lattice models."
        ),
    )
    parser.add_argument("--version", action="version", version=_VERSION)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sub = subs.add_parser("spectrum", help="eigenvalue sweep over t")
    _add_common(sub, steps_default=201)
    sub.set_defaults(func=cmd_spectrum)

    sub = subs.add_parser("domains", help="reality-domain partition of t")
    _add_common(sub, steps_default=None)
    sub.set_defaults(func=cmd_domains)

    sub = subs.add_parser("metric", help="metric positivity interval in t")
    _add_common(sub, steps_default=None)
    sub.add_argument(
        "--track",
        action="store_true",
        help="follow one kernel section numerically instead of a closed form",
    )
    sub.set_defaults(func=cmd_metric)

    sub = subs.add_parser("islands", help="intervals with exactly k real eigenvalues")
    _add_common(sub, steps_default=None)
    sub.add_argument("--k", type=int, required=True, help="real-eigenvalue count")
    sub.set_defaults(func=cmd_islands)

    sub = subs.add_parser("ep", help="exceptional points in a t-range")
    _add_common(sub, steps_default=None)
    sub.set_defaults(func=cmd_ep)

    sub = subs.add_parser("validate", help="structural and oracle self-checks")
    _add_common(sub, steps_default=None)
    sub.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (InvalidSpecError, ModelFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
