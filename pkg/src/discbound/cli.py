"""Command-line front end: ``discbound <subcommand> [options]``.

Integer lists accept ``a:b`` (inclusive), comma lists and ellipses.  An
ellipsis continues geometrically when the leading terms start at 2 or more
and share an integer ratio that reaches the final term, so ``2,4,...,256``
means the powers of two; otherwise it continues arithmetically, as in
``1,3,...,9`` or ``2,4,6,...,10``.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import constants as C
from .covers import (
    bracketing_bound_anchored,
    bracketing_bound_unanchored,
    build_bracketing_unanchored,
    build_cover_anchored,
    validate_cover,
    write_cover_csv,
)
from .discrepancy import (
    discrepancy_lower_bound,
    extreme_discrepancy_exact,
    read_points_csv,
    star_discrepancy_exact,
)
from .errors import BudgetExceededError, DomainError, PrecisionError
from .harness import bernstein_empirical_check, emit_figure, verify_bounds, write_csv

__all__ = ["main", "parse_int_list"]


def _geometric_ratio(head: list[int]) -> int:
    """Integer ratio > 1 shared by all leading terms (first term >= 2), else 0."""
    a, b = head[0], head[1]
    if a < 2 or b % a or b // a < 2:
        return 0
    r = b // a
    return r if all(y == x * r for x, y in zip(head, head[1:])) else 0


def _expand_ellipsis(head: list[int], last: int) -> list[int]:
    if len(head) < 2:
        raise ValueError("an ellipsis needs at least two leading terms")
    ratio = _geometric_ratio(head)
    if ratio:
        seq = list(head)
        while seq[-1] < last:
            seq.append(seq[-1] * ratio)
        if seq[-1] == last:
            return seq
    step = head[1] - head[0]
    if step <= 0 or (last - head[0]) % step:
        raise ValueError(f"cannot extend {head} to {last}")
    if any(y - x != step for x, y in zip(head, head[1:])):
        raise ValueError(f"leading terms {head} are not an arithmetic progression")
    return list(range(head[0], last + 1, step))


def parse_int_list(text: str) -> list[int]:
    """Parse ``a:b``, ``a,b,c`` and ``a,b,...,z`` into a list of integers."""
    out: list[int] = []
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty list")
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "...":
            if i + 1 >= len(tokens):
                raise ValueError("an ellipsis must be followed by a final term")
            last = int(tokens[i + 1])
            expanded = _expand_ellipsis(out, last)
            out = expanded
            i += 2
            continue
        if ":" in tok:
            lo, hi = (int(p) for p in tok.split(":", 1))
            if hi < lo:
                raise ValueError(f"empty range {tok!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(tok))
        i += 1
    return out


def _int_list(text: str) -> list[int]:
    try:
        return parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}: {exc}") from None


def _open_out(path: Optional[str]):
    return open(path, "w", encoding="utf-8", newline="") if path else None


def _cmd_constants(args) -> int:
    variant = C.Variant.parse(args.variant)
    profile = C.ConstantProfile(variant, args.alpha, args.beta, args.tol)
    rows = []
    for s in args.s:
        q = C.BoundQuery(2, s)
        rows.append([s, profile.A(s), profile.B, C.bound_c(profile, q)])
    _emit(args.out, ["s", "A_s", "B", "c_at_N2"], rows)
    return 0


def _emit(path, columns, rows) -> None:
    fh = _open_out(path)
    try:
        write_csv(fh or sys.stdout, columns, rows)
    finally:
        if fh:
            fh.close()


def _cmd_discrepancy(args) -> int:
    points = read_points_csv(args.input)
    if args.method == "exact":
        fn = star_discrepancy_exact if args.kind == "star" else extreme_discrepancy_exact
        res = fn(points)
    else:
        res = discrepancy_lower_bound(points, args.kind, args.trials, args.seed)
    s = points.s
    columns = ["kind", "method", "value", "exact", "closure"]
    columns += [f"lower_{j + 1}" for j in range(s)] + [f"upper_{j + 1}" for j in range(s)]
    row = [args.kind, args.method, res.value, int(res.exact), res.closure.value]
    row += list(res.witness.lower) + list(res.witness.upper)
    write_csv(sys.stdout, columns, [row])
    return 0


def _cmd_covers(args) -> int:
    if args.family == "anchored":
        cover = build_cover_anchored(args.delta, args.s)
        bound = bracketing_bound_anchored(args.delta, args.s)
    else:
        cover = build_bracketing_unanchored(args.delta, args.s)
        bound = bracketing_bound_unanchored(args.delta, args.s)
    report = validate_cover(cover, args.check_samples, args.seed)
    if args.emit:
        write_cover_csv(args.emit, cover)
    columns = ["family", "delta", "s", "bracketing", "size", "samples", "failures", "passed", "bracketing_bound"]
    row = [args.family, args.delta, args.s, int(cover.bracketing), len(cover), report.samples,
           len(report.failures), int(report.passed), bound]
    write_csv(sys.stdout, columns, [row])
    if not report.passed:
        print(f"error: {len(report.failures)} of {report.samples} sampled boxes have no bracket", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    report = verify_bounds(
        args.seeds, args.s, args.n, args.alpha, args.beta, args.variant, args.kind, args.trials, args.tol
    )
    header, rows = report.to_rows()
    _emit(args.out, header, rows)
    floor = 1.0 - C.failure_budget(args.alpha, args.beta)
    sys.stdout.write(
        f"# pass_fraction={report.pass_fraction!r} floor={floor!r} seeds={len({r[0] for r in rows})}\n"
    )
    return 0


def _cmd_figures(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    for fid in args.id:
        data = emit_figure(fid, args.alpha, args.beta, args.tol)
        path = os.path.join(args.out, f"figure{fid}.csv")
        write_csv(path, data.columns, data.rows)
        sys.stdout.write(path + "\n")
    return 0


def _cmd_bernstein(args) -> int:
    chk = bernstein_empirical_check(args.n, args.trials, args.t, args.seed)
    write_csv(
        sys.stdout,
        ["n", "t", "trials", "empirical", "bound", "standard_error", "holds"],
        [[chk.n, chk.t, chk.trials, chk.empirical, chk.bound, chk.standard_error, int(chk.holds)]],
    )
    if not chk.holds:
        print("error: empirical exceedance frequency is above the bound", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def constants_opts(p, with_tol=True):
        p.add_argument("--alpha", type=float, default=1.73)
        p.add_argument("--beta", type=float, default=1.73)
        if with_tol:
            p.add_argument("--tol", type=float, default=1e-6)

    p = sub.add_parser("constants", help="evaluate A_s, B and c(2, s)")
    p.add_argument("--variant", choices=[v.value for v in C.Variant], default="star")
    p.add_argument("--s", type=_int_list, default=parse_int_list("1:200"))
    constants_opts(p)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("discrepancy", help="discrepancy of a point set read from CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=["star", "extreme"], default="star")
    p.add_argument("--method", choices=["exact", "estimate"], default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_discrepancy)

    p = sub.add_parser("covers", help="build and validate a delta-cover")
    p.add_argument("--family", choices=["anchored", "unanchored"], default="anchored")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--check-samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", help="write the cover elements to this CSV file")
    p.set_defaults(func=_cmd_covers)

    p = sub.add_parser("verify", help="Monte Carlo check of the bound on seeded matrices")
    p.add_argument("--seeds", type=_int_list, default=parse_int_list("0:199"))
    p.add_argument("--s", type=_int_list, default=parse_int_list("1:5"))
    p.add_argument("--n", type=_int_list, default=parse_int_list("2,4,...,256"))
    p.add_argument("--variant", choices=[v.value for v in C.Variant], default="star")
    p.add_argument("--kind", choices=["star", "extreme"], default="star")
    p.add_argument("--trials", type=int, default=100_000, help="random boxes per estimated cell")
    constants_opts(p)
    p.add_argument("--out", help="report CSV (default: stdout)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figures", help="write figureK.csv data files")
    p.add_argument("--id", type=_int_list, default=[1, 2, 3])
    p.add_argument("--out", default=".")
    constants_opts(p)
    p.set_defaults(func=_cmd_figures)

    p = sub.add_parser("bernstein", help="empirical maximal Bernstein tail against its bound")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--t", type=float, default=30.0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bernstein)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, BudgetExceededError, PrecisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
