"""Command-line interface.

Subcommands:

* hn      -- normalization constants h_n with asymptotic comparison;
* dist    -- exact pmf of the total cycle count or of (C_1..C_b);
* sample  -- seeded, reproducible sampling of cycle types/permutations;
* report  -- limit-law diagnostics along an n-grid.

Exit codes: 0 success; 2 usage or config error; 3 mathematical
inconsistency (oracle mismatch, degenerate measure, unusable class);
4 failed trend assertion (--assert-trends).

Output is deterministic: identical invocations produce identical bytes;
floats carry 17 significant digits.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from .asymptotics import WeightFamily, asymptotic_hn
from .catalog import (FamilyHandle, GeneralizedFamily, exact_capable,
                      family_from_request)
from .diagnostics import (clt_report, dumps_deterministic, format_scalar,
                          large_deviation_table, mod_poisson_report,
                          poisson_k_approx_report, poisson_vector_report,
                          reports_to_csv, reports_to_json)
from .errors import (ConvergenceError, DegenerateMeasureError, GammaPoleError,
                     ResourceError, UnsupportedClassError, UsageError)
from .generalized import (generalized_joint_cycle_pmf,
                          generalized_normalization,
                          generalized_total_cycles_pmf)
from .measure import (joint_cycle_pmf, normalization_constants,
                      sample_cycle_type, sample_permutation, total_cycles_pmf)
from .partitions import (brute_force_cycle_type_pmf,
                         brute_force_generalized_cycle_type_pmf,
                         brute_force_generalized_k_pmf, brute_force_k_pmf)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MATH = 3
EXIT_TREND = 4

_REPORT_KINDS = ("poisson-vector", "mod-poisson", "clt", "poisson-k", "large-dev")
_DEFAULT_S_GRID = "0,0.5,-0.5,1,-1,2,-2"


class _TrendFailure(Exception):
    pass


def _family_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--family", required=True,
                   help="builtin kind (ewens, theta-shift, polylog, exp-weight, "
                        "alpha-exp, spatial, exp-poly) or a config section name")
    p.add_argument("--theta", help="weight parameter (ewens, theta-shift, exp-poly)")
    p.add_argument("--delta", help="polylog exponent")
    p.add_argument("--c", help="exp-weight scale")
    p.add_argument("--theta-exp", dest="theta_exp", help="exp-weight stretch exponent")
    p.add_argument("--alpha", help="alpha-exp / spatial site exponent")
    p.add_argument("--eps", help="spatial mode energies, comma-separated")
    p.add_argument("--amp", help="perturbation amplitude (theta-shift, alpha-exp)")
    p.add_argument("--power", help="perturbation power (theta-shift, alpha-exp)")
    p.add_argument("--config", help="INI file defining named families")
    p.add_argument("--backend", choices=("auto", "exact", "double"), default="auto")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclemeter",
                                     description="Exact cycle statistics of weighted "
                                                 "random permutations")
    sub = parser.add_subparsers(dest="command", required=True)
    fam = _family_parent()

    p_hn = sub.add_parser("hn", parents=[fam], help="normalization constants")
    p_hn.add_argument("--n", type=int)
    p_hn.add_argument("--n-grid", dest="n_grid", help="comma-separated n values")

    p_dist = sub.add_parser("dist", parents=[fam], help="exact distributions")
    p_dist.add_argument("--target", choices=("k", "cycles"), default="k")
    p_dist.add_argument("--n", type=int, required=True)
    p_dist.add_argument("--b", type=int, default=1)
    p_dist.add_argument("--oracle", action="store_true",
                        help="cross-check against the partition oracle")

    p_sample = sub.add_parser("sample", parents=[fam], help="seeded sampling")
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--count", type=int, default=1)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--cycle-type-only", dest="cycle_type_only",
                          action="store_true")

    p_rep = sub.add_parser("report", parents=[fam], help="limit-law diagnostics")
    p_rep.add_argument("--kind", choices=_REPORT_KINDS, required=True)
    p_rep.add_argument("--n", type=int, help="single n (large-dev)")
    p_rep.add_argument("--n-grid", dest="n_grid", help="comma-separated n values")
    p_rep.add_argument("--b", type=int, default=2)
    p_rep.add_argument("--s-grid", dest="s_grid", default=_DEFAULT_S_GRID)
    p_rep.add_argument("--k", default="auto+3sigma",
                       help="large-dev target point: an integer or auto+<c>sigma")
    p_rep.add_argument("--assert-trends", dest="assert_trends", action="store_true")
    return parser


def _flag_params(args) -> dict:
    keys = ("theta", "delta", "c", "theta_exp", "alpha", "eps", "amp", "power")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _resolve_family(args) -> FamilyHandle:
    return family_from_request(args.family, _flag_params(args), args.config)


def _resolve_backend(args, handle: FamilyHandle, n_max: int) -> str:
    if args.backend != "auto":
        return args.backend
    return "exact" if exact_capable(handle) and n_max <= 200 else "double"


def _parse_grid(args) -> list:
    values = []
    if getattr(args, "n", None) is not None:
        values.append(args.n)
    if getattr(args, "n_grid", None):
        try:
            values.extend(int(part) for part in args.n_grid.split(",") if part.strip())
        except ValueError as exc:
            raise UsageError(f"bad --n-grid {args.n_grid!r}") from exc
    if not values:
        raise UsageError("need --n or --n-grid")
    if any(n < 0 for n in values):
        raise UsageError("n values must be >= 0")
    return values


def _scalar_out(value, backend: str):
    if backend == "exact":
        return str(value) if isinstance(value, Fraction) else str(Fraction(value))
    return float(value)


def _pmf_out(pmf, backend: str) -> tuple:
    support = []
    mass = []
    for key, value in pmf.items():
        support.append(list(key) if isinstance(key, tuple) else key)
        mass.append(_scalar_out(value, backend))
    return support, mass


# -- subcommand implementations ---------------------------------------------


def _run_hn(args) -> str:
    handle = _resolve_family(args)
    ns = _parse_grid(args)
    n_max = max(ns)
    backend = _resolve_backend(args, handle, n_max)
    if isinstance(handle, GeneralizedFamily):
        h = generalized_normalization(handle.fweights, n_max, backend)
        cls = handle.cls
    else:
        h = normalization_constants(handle.weights, n_max, backend)
        cls = handle.cls
    rows = []
    for n in ns:
        asym = None
        ratio = None
        if cls is not None and cls.theta > 0 and not cls.main_term_zero and n > 0:
            asym = asymptotic_hn(cls, n)
            ratio = float(h[n]) / asym if asym else None
        rows.append({"n": n, "h": _scalar_out(h[n], backend),
                     "asymptotic": asym, "ratio": ratio})
    if args.format == "csv":
        lines = ["n,h,asymptotic,ratio"]
        for row in rows:
            asym = "" if row["asymptotic"] is None else format_scalar(row["asymptotic"])
            ratio = "" if row["ratio"] is None else format_scalar(row["ratio"])
            h_text = row["h"] if isinstance(row["h"], str) else format_scalar(row["h"])
            lines.append(f"{row['n']},{h_text},{asym},{ratio}")
        return "\n".join(lines) + "\n"
    doc = {"command": "hn", "family": args.family, "backend": backend, "rows": rows}
    return dumps_deterministic(doc) + "\n"


def _project_cycle_counts(type_pmf, b: int) -> dict:
    mass: dict = {}
    for lam, p in type_pmf.items():
        counts = lam.cycle_counts()
        key = tuple(counts.get(m, 0) for m in range(1, b + 1))
        mass[key] = mass.get(key, 0) + p
    return mass


def _oracle_check(pmf, handle: FamilyHandle, args, backend: str) -> None:
    n, b = args.n, args.b
    if isinstance(handle, GeneralizedFamily):
        if args.target == "k":
            reference = brute_force_generalized_k_pmf(handle.fweights, n, backend)
            ref_mass = dict(reference.items())
        else:
            type_pmf, _ = brute_force_generalized_cycle_type_pmf(handle.fweights, n, backend)
            ref_mass = _project_cycle_counts(type_pmf, b)
    else:
        if args.target == "k":
            reference = brute_force_k_pmf(handle.weights, n, backend)
            ref_mass = dict(reference.items())
        else:
            type_pmf, _ = brute_force_cycle_type_pmf(handle.weights, n, backend)
            ref_mass = _project_cycle_counts(type_pmf, b)
    for key, value in pmf.items():
        ref = ref_mass.get(key, 0)
        if backend == "exact":
            if value != ref:
                raise DegenerateMeasureError(
                    f"oracle mismatch at {key!r}: {value} vs {ref}")
        else:
            scale = max(abs(float(ref)), 1e-300)
            if abs(float(value) - float(ref)) > 1e-9 * max(1.0, scale):
                raise DegenerateMeasureError(
                    f"oracle mismatch at {key!r}: {value} vs {ref}")


def _run_dist(args) -> str:
    handle = _resolve_family(args)
    backend = _resolve_backend(args, handle, args.n)
    if args.target == "k":
        if isinstance(handle, GeneralizedFamily):
            pmf = generalized_total_cycles_pmf(handle.fweights, args.n, backend)
        else:
            pmf = total_cycles_pmf(handle.weights, args.n, backend)
    else:
        if isinstance(handle, GeneralizedFamily):
            pmf = generalized_joint_cycle_pmf(handle.fweights, args.n, args.b, backend)
        else:
            pmf = joint_cycle_pmf(handle.weights, args.n, args.b, backend)
    oracle = None
    if args.oracle:
        _oracle_check(pmf, handle, args, backend)
        oracle = "match"
    support, mass = _pmf_out(pmf, backend)
    if args.format == "csv":
        lines = ["support,mass"]
        for key, value in zip(support, mass):
            key_text = " ".join(str(c) for c in key) if isinstance(key, list) else str(key)
            value_text = value if isinstance(value, str) else format_scalar(value)
            lines.append(f"{key_text},{value_text}")
        return "\n".join(lines) + "\n"
    doc = {"command": "dist", "family": args.family, "target": args.target,
           "n": args.n, "b": args.b if args.target == "cycles" else None,
           "backend": backend, "oracle": oracle, "support": support, "mass": mass}
    return dumps_deterministic(doc) + "\n"


def _run_sample(args) -> str:
    handle = _resolve_family(args)
    if isinstance(handle, GeneralizedFamily):
        raise UsageError("sampling is defined for weighted families only")
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    if args.cycle_type_only:
        draws = sample_cycle_type(handle.weights, args.n, seed=args.seed,
                                  count=args.count)
        samples = [list(d.parts) for d in draws]
        kind = "cycle-type"
    else:
        draws = sample_permutation(handle.weights, args.n, seed=args.seed,
                                   count=args.count)
        samples = [list(d) for d in draws]
        kind = "permutation"
    if args.format == "csv":
        lines = [",".join(str(x) for x in row) for row in samples]
        return "\n".join(lines) + "\n"
    doc = {"command": "sample", "family": args.family, "n": args.n,
           "seed": args.seed, "count": args.count, "kind": kind, "samples": samples}
    return dumps_deterministic(doc) + "\n"


def _parse_k_spec(text: str):
    match = re.fullmatch(r"auto\+(\d+(?:\.\d+)?)sigma", text.strip())
    if match:
        return None, float(match.group(1))
    try:
        return int(text), None
    except ValueError as exc:
        raise UsageError(f"--k must be an integer or auto+<c>sigma, got {text!r}") from exc


def _run_report(args) -> str:
    handle = _resolve_family(args)
    if isinstance(handle, GeneralizedFamily):
        raise UsageError("reports need a weighted family (generalized handles "
                         "support hn and dist)")
    if handle.cls is None:
        raise UsageError(f"family {args.family} has no usable singularity class "
                         f"for reports: {handle.note or handle.status}")
    if args.kind == "large-dev":
        n = args.n
        if n is None:
            grid = _parse_grid(args)
            if len(grid) != 1:
                raise UsageError("large-dev takes a single --n")
            n = grid[0]
        k, sigmas = _parse_k_spec(args.k)
        table = large_deviation_table(handle, n, k,
                                      sigmas=3.0 if sigmas is None else sigmas)
        if args.assert_trends and table["rel_error"] > 0.25:
            raise _TrendFailure(
                f"large-deviation estimate off by {table['rel_error']:.3g} (> 0.25)")
        if args.format == "csv":
            lines = ["key,value"] + [f"{k},{format_scalar(v)}" for k, v in table.items()]
            return "\n".join(lines) + "\n"
        return dumps_deterministic({"command": "report", "kind": args.kind,
                                    "family": args.family, "table": table}) + "\n"

    ns = _parse_grid(args)
    if args.kind == "poisson-vector":
        reports = poisson_vector_report(handle, args.b, ns)
    elif args.kind == "mod-poisson":
        try:
            s_values = [float(s) for s in args.s_grid.split(",") if s.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --s-grid {args.s_grid!r}") from exc
        reports = mod_poisson_report(handle, ns, s_values)
    elif args.kind == "clt":
        reports = clt_report(handle, ns)
    else:
        reports = poisson_k_approx_report(handle, ns)

    if args.assert_trends:
        for report in reports:
            if len(report.values) >= 2 and report.values[-1] > report.values[0]:
                raise _TrendFailure(
                    f"{report.metric_label()} rose from {report.values[0]:.3g} "
                    f"to {report.values[-1]:.3g} over the n grid")
    if args.format == "csv":
        return reports_to_csv(reports)
    doc = {"command": "report", "kind": args.kind, "family": args.family,
           "reports": [r.to_dict() for r in reports]}
    return dumps_deterministic(doc) + "\n"


_RUNNERS = {"hn": _run_hn, "dist": _run_dist, "sample": _run_sample,
            "report": _run_report}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = _RUNNERS[args.command](args)
    except (UsageError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateMeasureError, UnsupportedClassError, ConvergenceError,
            GammaPoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except _TrendFailure as exc:
        print(f"trend assertion failed: {exc}", file=sys.stderr)
        return EXIT_TREND
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
