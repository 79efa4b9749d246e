"""Command-line interface.

Exit codes: 0 ok, 2 usage, 3 infeasible or out-of-domain parameters,
4 malformed input data, 5 estimation failure in a simulation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

from . import bounds, reports
from . import detection_sim as sim
from . import fockspace as fs
from .correlations import g2 as g2_of
from .correlations import summarize
from .errors import (
    CapacityError,
    DomainError,
    EstimationError,
    MalformedInputError,
    NumericUnderflowError,
)

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_MALFORMED, EXIT_ESTIMATION = 0, 2, 3, 4, 5


# ---------------------------------------------------------------- formatting


def _fmt(value, precision):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value) if precision == 0 else f"{value:.{precision}g}"
    return str(value)


def _jsonable(value, precision):
    if isinstance(value, float) and not isinstance(value, bool):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value if precision == 0 else float(f"{value:.{precision}g}")
    if isinstance(value, dict):
        return {k: _jsonable(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, precision) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return _jsonable(value.item(), precision)
    return value


def _write_table(out, header, rows, precision):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v.item() if hasattr(v, "item") else v, precision) for v in row])


def emit(args, header, rows, extra_tables=()):
    """Write one main table (plus optional extra ones) as csv or json.

    ``extra_tables`` is a sequence of ``(name, header, rows)``.
    """
    with _output(args.output) as out:
        if args.format == "json":
            doc = [dict(zip(header, r)) for r in rows]
            doc = doc[0] if len(doc) == 1 and not getattr(args, "_as_list", False) else doc
            if extra_tables:
                doc = {"result": doc}
                for name, h, rs in extra_tables:
                    doc[name] = [dict(zip(h, r)) for r in rs]
            json.dump(_jsonable(doc, args.precision), out, indent=2, sort_keys=False)
            out.write("\n")
        else:
            _write_table(out, header, rows, args.precision)
            for _, h, rs in extra_tables:
                out.write("\n")
                _write_table(out, h, rs, args.precision)


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# ---------------------------------------------------------------- state specs


def _add_state_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fock", type=int, metavar="N")
    g.add_argument("--coherent", type=float, metavar="MEAN")
    g.add_argument("--thermal", type=float, metavar="MEAN")
    g.add_argument("--two-component", type=float, nargs=2, metavar=("P", "Q"))
    g.add_argument("--one-n", type=float, nargs=2, metavar=("P", "N"))
    g.add_argument("--file", metavar="PATH", help="CSV distribution with header n,prob")
    p.add_argument("--vacuum", type=float, metavar="X", help="mix in vacuum with weight X")


def build_state(args) -> fs.PhotonNumberDistribution:
    if args.fock is not None:
        dist = fs.make_fock(args.fock)
    elif args.coherent is not None:
        dist = fs.make_coherent(args.coherent)
    elif args.thermal is not None:
        dist = fs.make_thermal(args.thermal)
    elif args.two_component is not None:
        dist = fs.make_two_component(*args.two_component)
    elif args.one_n is not None:
        p, n = args.one_n
        if n != int(n):
            raise DomainError(f"Fock number must be an integer, got {n}")
        dist = fs.make_one_n(p, int(n))
    else:
        try:
            dist = fs.read_csv(args.file)
        except OSError as exc:
            raise MalformedInputError(f"cannot read {args.file}: {exc}") from None
    if args.vacuum is not None:
        dist = fs.add_vacuum(dist, args.vacuum)
    return dist


# ---------------------------------------------------------------- commands

SUMMARY_FIELDS = ["mean_n", "g2", "vacuum_x", "g2_eff", "smpp_exact", "g2_is_convention"]
BOUND_FIELDS = ["ratio_lower", "p_min", "p_max", "purity_lower", "q_upper", "conclusive"]


def analysis_record(dist):
    """Summary and bounds of one state as a flat mapping."""
    s = summarize(dist)
    record = {k: getattr(s, k) for k in SUMMARY_FIELDS}
    if s.g2_is_convention:
        # the vacuum's g2 is a convention; no bound follows from it
        record.update(dict.fromkeys(BOUND_FIELDS))
    else:
        r = bounds.full_report(s.g2, s.vacuum_x)
        record.update({k: getattr(r, k) for k in BOUND_FIELDS})
    return record


def cmd_analyze(args):
    record = analysis_record(build_state(args))
    emit(args, list(record), [list(record.values())])


def _maybe(fn, *a):
    try:
        return fn(*a)
    except DomainError:
        return None


def cmd_bounds(args):
    r = bounds.full_report(args.g2, args.x)
    header = ["g2", "x", "g2_eff"] + BOUND_FIELDS
    row = [getattr(r, k) for k in header]
    extra = []
    if args.n_list:
        qh = ["n", "q_meanlimit", "q_refined", "q_rel_vacuum", "q_abs_vacuum"]
        qrows = []
        for n in args.n_list:
            mean_limit = bounds.qn_upper_bound_meanlimit(n) if args.g2 <= 0.5 else None
            refined = _maybe(bounds.qn_upper_bound_refined, args.g2, n)
            with_vac = _maybe(bounds.qn_upper_bound_with_vacuum, args.g2, args.x, n) or (None, None)
            qrows.append([n, mean_limit, refined, *with_vac])
        extra.append(("qn", qh, qrows))
    emit(args, header, [row], extra)


def cmd_invert(args):
    if args.q is not None:
        p = bounds.invert_two_component(args.g2, args.q)
        check = g2_of(fs.make_two_component(p, args.q))
        header, row = ["g2", "q", "p", "vacuum", "g2_forward"], [args.g2, args.q, p, 1.0 - p - args.q, check]
    else:
        p = bounds.invert_one_n(args.g2, args.n)
        check = g2_of(fs.make_one_n(p, args.n))
        header, row = ["g2", "n", "p", "q_n", "g2_forward"], [args.g2, args.n, p, 1.0 - p, check]
    emit(args, header, [row])


def cmd_table1(args):
    records = reports.table1()
    header = list(records[0])
    args._as_list = True
    emit(args, header, [list(r.values()) for r in records])


def cmd_figure(args):
    if args.id not in reports.FIGURES:
        print(f"error: unknown figure id {args.id}; choose from 1-5", file=sys.stderr)
        return EXIT_USAGE
    header, rows = reports.FIGURES[args.id]()
    args._as_list = True
    emit(args, header, rows)
    return EXIT_OK


def cmd_simulate(args):
    dist = build_state(args)
    config = sim.SimulationConfig(
        shots=args.shots,
        seed=args.seed,
        efficiency=args.efficiency,
        split=args.split,
        bootstrap_resamples=args.bootstrap,
        workers=args.workers,
    )
    samples = sim.sample(dist, config, args.backend)
    if args.dump:
        sim.write_samples(samples, args.dump)
    x_hat = sim.estimate_vacuum(samples)
    g2_raw = sim.estimate_g2(samples)
    direct = sim.estimate_g2(sim.post_select(samples))
    scaled = sim.scaled_effective_g2(samples, g2_raw, x_hat)
    header = ["quantity", "value", "std_error", "shots_used"]
    rows = [
        [name, e.value, e.std_error, e.shots_used]
        for name, e in (
            ("g2_raw", g2_raw),
            ("x_hat", x_hat),
            ("g2_eff_direct", direct),
            ("g2_eff_scaled", scaled),
        )
    ]
    args._as_list = True
    emit(args, header, rows)


AUDIT_HEADER = ["label", "g2", "x", "g2_eff", "ratio_lower", "q_upper", "p_min", "p_max", "conclusive"]


def read_audit_rows(path):
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from None
    with fh:
        reader = csv.reader(line for line in fh if line.strip())
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["label", "g2", "x"]:
            raise MalformedInputError(f"expected header 'label,g2,x', got {header!r}")
        rows = []
        for i, row in enumerate(reader, start=1):
            if len(row) != 3:
                raise MalformedInputError(f"expected 3 fields, got {len(row)}", row=i)
            try:
                g, x = float(row[1]), float(row[2])
            except ValueError as exc:
                raise MalformedInputError(str(exc), row=i) from None
            if not (g >= 0 and math.isfinite(g)) or not (0.0 <= x <= 1.0):
                raise MalformedInputError(f"g2={row[1]!r}, x={row[2]!r} out of range", row=i)
            rows.append((row[0], g, x))
    return rows


def cmd_audit(args):
    out = []
    for label, g, x in read_audit_rows(args.input):
        r = bounds.full_report(g, x)
        out.append([label, g, x, r.g2_eff, r.ratio_lower, r.q_upper, r.p_min, r.p_max, r.conclusive])
    args._as_list = True
    emit(args, AUDIT_HEADER, out)


# ---------------------------------------------------------------- parser


def _prob(text):
    v = float(text)
    if not (0.0 <= v <= 1.0):
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def _nonneg(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="photonstats",
        description="Photon statistics, effective g2 and single-photon projection bounds.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", "-o", metavar="PATH", help="write here instead of stdout")
    common.add_argument(
        "--precision", type=int, default=6, help="significant digits (0 = full round-trip precision)"
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", parents=[common], help="statistics and bounds of a state")
    _add_state_args(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", parents=[common], help="bounds from measured g2 and vacuum weight")
    p.add_argument("--g2", type=_nonneg, required=True)
    p.add_argument("--x", type=_prob, default=0.0)
    p.add_argument("--n-list", type=int, nargs="+", metavar="N")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("invert", parents=[common], help="state weights realizing a given g2")
    p.add_argument("--g2", type=_nonneg, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=_prob, help="two-photon weight of the |0>,|1>,|2> family")
    g.add_argument("--n", type=int, help="Fock number of the |1>,|n> family")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("table1", parents=[common], help="recompute the comparison table")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figure", parents=[common], help="plot data as CSV")
    p.add_argument("--id", type=int, required=True, help="figure number 1-5")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo post-selection measurement")
    _add_state_args(p)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--efficiency", type=float, default=1.0)
    p.add_argument("--split", action="store_true", help="50/50 HBT beam splitter")
    p.add_argument("--bootstrap", type=int, default=1000, metavar="B")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--backend", choices=["python", "compiled"], default=None)
    p.add_argument("--dump", metavar="PATH", help="write the sample record as CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("audit", parents=[common], help="bounds for a CSV series label,g2,x")
    p.add_argument("--input", required=True, metavar="PATH")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except MalformedInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except (DomainError, CapacityError, NumericUnderflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:  # e.g. unavailable backend
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
