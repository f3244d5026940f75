"""Command-line entry point: ``cyclewalk {exact,curve,simulate,bounds,chartable}``.

Exit codes: 0 success, 1 usage error, 2 size above a configured ceiling,
3 two routes that must agree did not.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .bounds import (
    asymptotic_pmf_k1,
    bounds_report,
    ds_upper_bound,
    moment_k1,
    moments_k,
    theorem_envelopes,
)
from .characters import FeasibilityError, character_table
from .partitions import format_partition
from .sampling import simulate
from .serialize import clean_float, csv_text, dumps, format_prob, measure_to_dict
from .walk import (
    AUTO,
    EXACT,
    FLOAT,
    InvariantError,
    WalkSpec,
    c_for,
    evolve_direct,
    evolve_fourier,
    iter_direct,
    max_discrepancy,
    resolve_mode,
    stationary_for,
    stationary_measure,
    tv,
)

DEFAULT_SEED = 12345
FLOAT_AGREEMENT = 1e-10
CURVE_FLAG_LEVEL = 0.01


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, steps: bool = True) -> None:
    p.add_argument("--n", type=int, help="degree of the symmetric group")
    p.add_argument("--k", type=int, help="fixed points of the initial cycle (cycle length n - k)")
    if steps:
        p.add_argument("--t", type=int, help="transpositions after the initial cycle")
        p.add_argument("--c", type=float, help="derive t = round(cn) (k=1) or round(cn + (n/2) ln k)")
    p.add_argument("--mode", choices=[AUTO, EXACT, FLOAT], help="numeric mode (default auto)")
    p.add_argument("--format", choices=["json", "csv"], help="output format")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--config", help="JSON file of flag values; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclewalk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cyclewalk {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("exact", help="exact law after the cycle and t transpositions, with TV to stationarity")
    _common(p)
    p.add_argument("--engine", choices=["direct", "fourier", "both"])

    p = sub.add_parser("curve", help="TV and bounds for t = 0..t_max")
    _common(p, steps=False)
    p.add_argument("--t-max", dest="t_max", type=int)
    p.add_argument("--engine", choices=["direct", "fourier"])
    p.add_argument("--with-bounds", dest="with_bounds", action=argparse.BooleanOptionalAction, default=None)

    p = sub.add_parser("simulate", help="Monte Carlo fixed-point statistics")
    _common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--shards", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("bounds", help="finite-n and limiting bounds for one (n, k, c)")
    _common(p)
    p.add_argument("--samples", type=int, help="also attach simulated statistics")
    p.add_argument("--shards", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("chartable", help="character table as CSV")
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.add_argument("--config")
    return parser


DEFAULTS = {
    "k": 1, "mode": AUTO, "engine": "direct", "shards": 1,
    "seed": DEFAULT_SEED, "with_bounds": True,
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    values = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            values = json.load(fh)
        if not isinstance(values, dict):
            raise UsageError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if value is None and key in values:
            setattr(args, key, values[key])
    for key, value in DEFAULTS.items():
        if getattr(args, key, "missing") is None:
            setattr(args, key, value)
    return args


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _spec(args, samples: int = 0) -> WalkSpec:
    _require(args, "n")
    if (args.t is None) == (args.c is None):
        raise UsageError("give exactly one of --t or --c")
    return WalkSpec(args.n, args.k, t=args.t, c=args.c, seed=args.seed if hasattr(args, "seed") else 0,
                    samples=samples)


def _metadata(args, spec: WalkSpec | None = None, mode: str | None = None) -> dict:
    meta = {"version": __version__, "command": args.command}
    if spec is not None:
        meta.update({"n": spec.n, "k": spec.k, "t": spec.steps, "derived_t": spec.t is None,
                     "c": spec.c if spec.c is not None else c_for(spec.n, spec.k, spec.steps)})
    if mode is not None:
        meta["mode"] = mode
    if getattr(args, "seed", None) is not None and args.command in ("simulate", "bounds"):
        meta["seed"] = args.seed
        meta["shards"] = args.shards
    return meta


def cmd_exact(args) -> tuple[str, int]:
    spec = _spec(args)
    mode = resolve_mode(args.mode, spec.n, spec.steps)
    status = 0
    engines = {}
    if args.engine in ("direct", "both"):
        engines["direct"] = evolve_direct(spec, mode)
    if args.engine in ("fourier", "both"):
        engines["fourier"] = evolve_fourier(spec, mode)
    law = next(iter(engines.values()))
    target = stationary_for(spec)
    distance = tv(law, target)
    discrepancy = None
    if len(engines) == 2:
        discrepancy = max_discrepancy(engines["direct"], engines["fourier"])
        limit = 0 if mode == EXACT else FLOAT_AGREEMENT
        if discrepancy > limit:
            status = 3
            print(f"cyclewalk: engines disagree by {discrepancy}", file=sys.stderr)
    meta = _metadata(args, spec, mode)
    meta["engine"] = args.engine
    if args.format == "csv":
        rows = [(format_partition(mu), law[mu], target[mu])
                for mu in sorted(set(law.probs) | set(target.probs), key=lambda m: tuple(-p for p in m))]
        meta["tv"] = format_prob(distance)
        if discrepancy is not None:
            meta["max_discrepancy"] = format_prob(discrepancy)
        return csv_text(["type", "prob", "stationary_prob"], rows, meta), status
    out = {
        "metadata": meta,
        "measure": measure_to_dict(law),
        "stationary": measure_to_dict(target),
        "tv": format_prob(distance),
        "max_discrepancy": None if discrepancy is None else format_prob(discrepancy),
    }
    return dumps(out), status


CURVE_HEADER = ["t", "c", "tv", "ds_upper", "theorem_lower", "theorem_upper", "first_below_0.01"]


def curve_rows(n: int, k: int, t_max: int, engine: str = "direct", mode: str = AUTO, with_bounds: bool = True):
    """One row per t = 0..t_max; see CURVE_HEADER."""
    if engine == "direct":
        laws = iter_direct(n, k, t_max, mode)
    else:
        laws = ((t, evolve_fourier(WalkSpec(n, k, t=t), mode)) for t in range(t_max + 1))
    rows = []
    flagged = False
    for t, law in laws:
        distance = tv(law, stationary_measure(n, t + 1, k))
        c = c_for(n, k, t)
        lower = upper = upper_bound = None
        if with_bounds:
            upper_bound = ds_upper_bound(n, k, t)
            if c > 0:
                lower, upper = theorem_envelopes(k, c)
        flag = 0
        if not flagged and distance < CURVE_FLAG_LEVEL:
            flag = flagged = 1
        rows.append([t, c, distance, upper_bound, lower, upper, flag])
    return rows


def cmd_curve(args) -> tuple[str, int]:
    _require(args, "n", "t_max")
    if args.t_max < 0:
        raise UsageError("--t-max must be non-negative")
    WalkSpec(args.n, args.k, t=0)
    mode = resolve_mode(args.mode, args.n, args.t_max)
    rows = curve_rows(args.n, args.k, args.t_max, args.engine, mode, args.with_bounds)
    meta = _metadata(args)
    meta.update({"n": args.n, "k": args.k, "t_max": args.t_max, "engine": args.engine, "mode": mode})
    if args.format == "json":
        return dumps({"metadata": meta, "columns": CURVE_HEADER,
                      "rows": [[format_prob(v) if isinstance(v, (float, Fraction)) else v for v in row]
                               for row in rows]}), 0
    return csv_text(CURVE_HEADER, rows, meta), 0


def simulation_summary(spec: WalkSpec, result, max_j: int = 10) -> dict:
    """Fixed-point histogram, first three moments with standard errors, limiting references."""
    c = spec.c if spec.c is not None else c_for(spec.n, spec.k, spec.steps)
    refs: dict[int, float] = {}
    if c > 0:
        if spec.k == 1:
            refs = {r: moment_k1(r, c) for r in (1, 2, 3)}
        elif spec.k >= 2:
            first, second, third = moments_k(spec.k, c)
            refs = {1: first, 2: second}
            if third is not None:
                refs[3] = third
    moments = []
    for r in (1, 2, 3):
        mean, se = result.moment(r)
        moments.append({"r": r, "mean": mean, "se": clean_float(se), "limit": refs.get(r),
                        "z": None if r not in refs or not se else (mean - refs[r]) / se})
    pmf = []
    for j in range(max_j + 1):
        p, se = result.probability(j)
        row = {"j": j, "empirical": p, "se": se}
        if spec.k == 1 and c > 0:
            row["limit"] = asymptotic_pmf_k1(j, c)
        pmf.append(row)
    summary = {
        "samples": result.samples,
        "fixed_point_histogram": {str(j): cnt for j, cnt in sorted(result.fixed_points.items())},
        "moments": moments,
        "pmf": pmf,
    }
    if result.classes is not None:
        summary["class_histogram"] = [{"type": format_partition(mu), "count": cnt}
                                      for mu, cnt in sorted(result.classes.items(),
                                                            key=lambda kv: tuple(-p for p in kv[0]))]
    return summary


DEFAULT_SAMPLES = 100_000


def cmd_simulate(args) -> tuple[str, int]:
    if args.samples is None:
        args.samples = DEFAULT_SAMPLES
    if args.samples < 1 or args.shards < 1:
        raise UsageError("--samples and --shards must be at least 1")
    spec = _spec(args, samples=args.samples)
    result = simulate(spec, shards=args.shards)
    meta = _metadata(args, spec, mode="simulation")
    summary = simulation_summary(spec, result)
    if args.format == "csv":
        rows = [(m["r"], m["mean"], m["se"], m["limit"]) for m in summary["moments"]]
        return csv_text(["r", "mean", "se", "limit"], rows, meta), 0
    return dumps({"metadata": meta, **summary}), 0


EXACT_TV_MAX_N = 10


def cmd_bounds(args) -> tuple[str, int]:
    _require(args, "n")
    if (args.t is None) == (args.c is None):
        raise UsageError("give exactly one of --t or --c")
    if args.k < 1:
        raise UsageError("k must be at least 1")
    spec = WalkSpec(args.n, args.k, t=args.t, c=args.c, seed=args.seed)
    exact_tv = None
    if spec.n <= EXACT_TV_MAX_N:
        exact_tv = float(tv(evolve_direct(spec, args.mode), stationary_for(spec)))
    stats = None
    if args.samples is not None:
        if args.samples < 1:
            raise UsageError("--samples must be at least 1")
        sim = simulate(WalkSpec(spec.n, spec.k, t=spec.steps, seed=args.seed, samples=args.samples), args.shards)
        stats = simulation_summary(spec, sim)
    report = bounds_report(spec.n, spec.k, c=args.c, t=args.t, exact_tv=exact_tv, simulated_stats=stats)
    meta = _metadata(args, spec, mode=resolve_mode(args.mode, spec.n, spec.steps))
    if args.format == "csv":
        return csv_text(list(report.CSV_FIELDS), [report.csv_row()], meta), 0
    return dumps({"metadata": meta, "report": report.to_dict()}), 0


def cmd_chartable(args) -> tuple[str, int]:
    _require(args, "n")
    return character_table(args.n).to_csv(), 0


COMMANDS = {"exact": cmd_exact, "curve": cmd_curve, "simulate": cmd_simulate,
            "bounds": cmd_bounds, "chartable": cmd_chartable}
DEFAULT_FORMAT = {"exact": "json", "curve": "csv", "simulate": "json", "bounds": "json"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        args = _merge_config(args)
        if hasattr(args, "format") and args.format is None:
            args.format = DEFAULT_FORMAT[args.command]
        text, status = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cyclewalk: error: {exc}", file=sys.stderr)
        return 1
    except FeasibilityError as exc:
        print(f"cyclewalk: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"cyclewalk: invariant violated: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"cyclewalk: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
