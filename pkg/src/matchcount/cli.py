"""Command line interface.

Subcommands:

    exact       count matchings of one matrix, with a permanent cross-check
    estimate    run randomized trials (rm or amm) against exact values
    moments     evaluate one closed-form ensemble moment by formula id
    verify      run the self-check suite (small or full tier)
    ratio-scan  tabulate mean, second moment and critical ratio over n

Matrices come from --input FILE (text format: "m n" header, then 0/1 rows)
or --random SPEC (e.g. bernoulli:4:4:1/2) plus --seed.  Every reported value
is exact (integer or p/q); decimal columns are 12-significant-digit
renderings added for reading convenience.
"""

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .ensembles import EnsembleSpec, sample_matrix
from .errors import MatchcountError, CapacityError, UndefinedRatioError
from .estimators import Method, run_trials
from .exact import (
    MAX_TRANSFORM_SIDE,
    count_all_matchings,
    count_matchings_via_permanent,
    critical_ratio,
    matching_profile,
    permanent_ryser,
)
from .matrix import ZeroOneMatrix, read_matrix, write_matrix
from .moments import (
    DEFAULT_DIGITS,
    bernoulli_mean_matchings,
    bernoulli_second_moment,
    edge_count_mean_matchings,
    edge_count_second_moment,
    majority_tail,
    mean_matchings_bounds,
    meets_power_threshold,
    second_moment_diag_lower_bound,
    to_decimal,
)
from .streams import RandomStream
from .verify import run_suite

# Matrices sampled for the CLI use this reserved stream so that trial streams
# (ids 0 .. trials-1) never overlap it.
SAMPLING_STREAM = 2**63
# Sampled matrices up to this side are echoed into the record.
ECHO_LIMIT = 8

FORMULAS = ("thm3", "thm4", "thm5", "thm6", "thm7", "thm8-mean", "thm8-m2")


@dataclass
class ResultRecord:
    """One command's output: echoed parameters, exact values, renderings."""

    command: str
    params: dict[str, str] = field(default_factory=dict)
    values: dict[str, str] = field(default_factory=dict)
    decimals: dict[str, str] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    matrix_text: str | None = None
    elapsed_ms: float = 0.0

    def put(self, name: str, value, decimal: bool = True):
        self.values[name] = str(value)
        if decimal:
            self.decimals[name] = to_decimal(value)

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "params": self.params,
            "values": self.values,
            "decimals": self.decimals,
            "flags": self.flags,
            "notes": self.notes,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.matrix_text is not None:
            out["matrix"] = self.matrix_text
        return out


def _power_threshold_decimal(n: int, digits: int = DEFAULT_DIGITS) -> str:
    """n ** (sqrt(n)/2) rendered to `digits` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits + 8
        value = Decimal(n) ** (Decimal(n).sqrt() / 2)
        ctx.prec = digits
        return str(+value)


def _render_record(record: ResultRecord, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        header = ["command"]
        row = [record.command]
        for prefix, mapping in (
            ("param:", record.params),
            ("value:", record.values),
            ("decimal:", record.decimals),
            ("flag:", record.flags),
        ):
            for key, value in mapping.items():
                header.append(prefix + key)
                row.append(str(value).lower() if isinstance(value, bool) else str(value))
        header.append("notes")
        row.append("; ".join(record.notes))
        if record.matrix_text is not None:
            header.append("matrix")
            row.append(record.matrix_text)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerow(row)
        return buf.getvalue()
    lines = [record.command]
    for key, value in record.params.items():
        lines.append(f"  {key} = {value}")
    for key, value in record.values.items():
        if key in record.decimals and record.decimals[key] != value:
            lines.append(f"  {key} = {value}  ({record.decimals[key]})")
        else:
            lines.append(f"  {key} = {value}")
    for key, value in record.flags.items():
        lines.append(f"  {key} = {'true' if value else 'false'}")
    for note in record.notes:
        lines.append(f"  note: {note}")
    if record.matrix_text is not None:
        lines.append("  matrix:")
        lines.extend("    " + line for line in record.matrix_text.splitlines())
    lines.append(f"  elapsed-ms = {record.elapsed_ms:.3f}")
    return "\n".join(lines) + "\n"


def _render_table(command: str, columns: list[str], rows: list[list], fmt: str) -> str:
    text_rows = [
        [str(v).lower() if isinstance(v, bool) else str(v) for v in row] for row in rows
    ]
    if fmt == "json":
        payload = {
            "command": command,
            "rows": [dict(zip(columns, row)) for row in rows],
        }
        return json.dumps(payload, indent=2, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(columns)
        writer.writerows(text_rows)
        return buf.getvalue()
    widths = [
        max(len(col), *(len(row[i]) for row in text_rows)) if text_rows else len(col)
        for i, col in enumerate(columns)
    ]
    lines = ["  ".join(col.ljust(widths[i]) for i, col in enumerate(columns)).rstrip()]
    for row in text_rows:
        lines.append("  ".join(row[i].ljust(widths[i]) for i in range(len(columns))).rstrip())
    return "\n".join(lines) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_matrix(args, record: ResultRecord) -> ZeroOneMatrix:
    if args.input is not None:
        with open(args.input, encoding="utf-8") as handle:
            a = read_matrix(handle.read())
        record.params["input"] = args.input
    else:
        spec = EnsembleSpec.parse(args.random)
        a = sample_matrix(spec, RandomStream(args.seed, SAMPLING_STREAM))
        record.params["random"] = str(spec)
    record.params["rows"] = str(a.rows)
    record.params["cols"] = str(a.cols)
    if args.input is None and max(a.rows, a.cols) <= ECHO_LIMIT:
        record.matrix_text = write_matrix(a)
    return a


def cmd_exact(args) -> int:
    start = time.perf_counter()
    record = ResultRecord("exact")
    if args.input is None:
        record.params["seed"] = str(args.seed)
    a = _load_matrix(args, record)
    count = count_all_matchings(a)
    record.put("count", count)
    record.put("profile", " ".join(str(c) for c in matching_profile(a)), decimal=False)
    code = 0
    if a.is_square and a.rows <= MAX_TRANSFORM_SIDE:
        via = count_matchings_via_permanent(a)
        record.flags["permanent-route-match"] = via == count
        if via != count:
            record.put("permanent-route-count", via)
            code = 1
    else:
        reason = "matrix not square" if not a.is_square else f"side above {MAX_TRANSFORM_SIDE}"
        record.notes.append(f"permanent cross-check skipped: {reason}")
    record.elapsed_ms = (time.perf_counter() - start) * 1000.0
    _emit(args, _render_record(record, args.format))
    return code


def cmd_estimate(args) -> int:
    start = time.perf_counter()
    record = ResultRecord("estimate")
    record.params["seed"] = str(args.seed)
    a = _load_matrix(args, record)
    method = Method(args.method)
    record.params["method"] = method.value
    record.params["trials"] = str(args.trials)
    record.params["workers"] = str(args.workers)
    stats = run_trials(a, method, args.trials, args.seed, workers=args.workers)
    record.put("mean", stats.mean)
    record.put("second-moment", stats.second_moment)
    record.put("variance", stats.variance)
    try:
        record.put("empirical-ratio", stats.empirical_ratio)
    except UndefinedRatioError:
        record.notes.append("empirical ratio undefined: sample mean is 0")
    try:
        if method is Method.AMM:
            exact = count_all_matchings(a)
        else:
            exact = permanent_ryser(a)
        record.put("exact-value", exact)
        if exact:
            record.put("rel-error", abs(stats.mean - exact) / exact)
        try:
            record.put("exact-ratio", critical_ratio(a, method))
        except UndefinedRatioError:
            record.notes.append("exact ratio undefined: mean is 0")
    except CapacityError as exc:
        record.notes.append(f"exact side skipped: {exc}")
    record.elapsed_ms = (time.perf_counter() - start) * 1000.0
    _emit(args, _render_record(record, args.format))
    return 0


def _require(args, record: ResultRecord, *names: str):
    for name in names:
        if getattr(args, name) is None:
            raise MatchcountError(f"formula {args.formula} needs --{name}")
        record.params[name] = str(getattr(args, name))


def cmd_moments(args) -> int:
    start = time.perf_counter()
    record = ResultRecord("moments")
    record.params["formula"] = args.formula
    formula = args.formula
    if formula in ("thm3", "thm4"):
        _require(args, record, "n")
        m = args.n if args.m is None else args.m
        record.params["m"] = str(m)
        fn = bernoulli_mean_matchings if formula == "thm3" else bernoulli_second_moment
        record.put("value", fn(m, args.n))
    elif formula == "thm5":
        _require(args, record, "n")
        bounds = mean_matchings_bounds(args.n)
        record.put("kstar", bounds.kstar, decimal=False)
        record.put("peak", bounds.peak)
        record.put("mean", bounds.mean)
        record.put("upper", bounds.upper)
        record.put("n-peak", bounds.n_peak)
        record.flags["peak-le-mean"] = bounds.peak_le_mean
        record.flags["mean-le-upper"] = bounds.mean_le_upper
        record.flags["mean-le-n-peak"] = bounds.mean_le_n_peak
    elif formula == "thm6":
        _require(args, record, "n")
        mean = bernoulli_mean_matchings(args.n, args.n)
        second = bernoulli_second_moment(args.n, args.n)
        ratio = second / mean**2
        record.put("mean", mean)
        record.put("second-moment", second)
        record.put("ratio", ratio)
        record.values["threshold"] = _power_threshold_decimal(args.n)
        record.flags["ratio-ge-threshold"] = meets_power_threshold(ratio, args.n)
        record.put("lower-bound-diag", second_moment_diag_lower_bound(args.n))
    elif formula == "thm7":
        _require(args, record, "n")
        eps = Fraction(args.eps)
        record.params["eps"] = str(eps)
        record.put("value", majority_tail(args.n, eps))
    else:  # thm8-mean, thm8-m2
        _require(args, record, "n", "m")
        fn = edge_count_mean_matchings if formula == "thm8-mean" else edge_count_second_moment
        record.put("value", fn(args.n, args.m))
    record.elapsed_ms = (time.perf_counter() - start) * 1000.0
    _emit(args, _render_record(record, args.format))
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    columns = ["check", "status", "ms", "detail"]
    rows = [
        [r.name, "pass" if r.passed else "FAIL", f"{r.elapsed_ms:.1f}", r.detail]
        for r in results
    ]
    _emit(args, _render_table("verify", columns, rows, args.format))
    return 0 if all(r.passed for r in results) else 1


def cmd_ratio_scan(args) -> int:
    try:
        lo, hi = (int(part) for part in args.n_range.split(":"))
    except ValueError:
        raise MatchcountError(f"--n-range wants LO:HI, got {args.n_range!r}") from None
    if not 1 <= lo <= hi:
        raise MatchcountError(f"--n-range wants 1 <= LO <= HI, got {args.n_range!r}")
    eps = Fraction(args.eps)
    columns = [
        "n",
        "mean",
        "second-moment",
        "ratio",
        "ratio-decimal",
        "threshold-decimal",
        "ratio-ge-threshold",
        "lower-bound-diag",
        "majority-tail",
    ]
    rows = []
    for n in range(lo, hi + 1):
        mean = bernoulli_mean_matchings(n, n)
        second = bernoulli_second_moment(n, n)
        ratio = second / mean**2
        rows.append(
            [
                n,
                str(mean),
                str(second),
                str(ratio),
                to_decimal(ratio),
                _power_threshold_decimal(n),
                meets_power_threshold(ratio, n),
                str(second_moment_diag_lower_bound(n)),
                str(majority_tail(n, eps)),
            ]
        )
    _emit(args, _render_table("ratio-scan", columns, rows, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchcount",
        description="Exact and randomized counting of bipartite matchings in 0-1 matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", metavar="PATH", default=None, help="write output to a file")

    def add_matrix_source(p):
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--input", metavar="FILE", help="matrix file ('m n' header, 0/1 rows)")
        source.add_argument(
            "--random",
            metavar="SPEC",
            help="sample from bernoulli:m:n:p, exactones:m:n or edges:m:n",
        )
        p.add_argument("--seed", type=int, default=0)

    p_exact = sub.add_parser("exact", help="exact matching count and profile of one matrix")
    add_matrix_source(p_exact)
    add_common(p_exact)
    p_exact.set_defaults(handler=cmd_exact)

    p_est = sub.add_parser("estimate", help="randomized trials with exact comparison")
    add_matrix_source(p_est)
    p_est.add_argument("--method", choices=tuple(m.value for m in Method), default="amm")
    p_est.add_argument("--trials", type=int, default=1000)
    p_est.add_argument("--workers", type=int, default=1)
    add_common(p_est)
    p_est.set_defaults(handler=cmd_estimate)

    p_mom = sub.add_parser("moments", help="closed-form ensemble moments")
    p_mom.add_argument("formula", choices=FORMULAS)
    p_mom.add_argument("--n", type=int, default=None)
    p_mom.add_argument("--m", type=int, default=None)
    p_mom.add_argument("--eps", default="1/50", help="rational like 1/50")
    add_common(p_mom)
    p_mom.set_defaults(handler=cmd_moments)

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    p_ver.add_argument("--suite", choices=("small", "full"), default="small")
    add_common(p_ver)
    p_ver.set_defaults(handler=cmd_verify)

    p_scan = sub.add_parser("ratio-scan", help="mean/second moment/ratio table over n")
    p_scan.add_argument("--n-range", default="1:40", help="inclusive LO:HI")
    p_scan.add_argument("--eps", default="1/50", help="rational like 1/50")
    add_common(p_scan)
    p_scan.set_defaults(handler=cmd_ratio_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except MatchcountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
