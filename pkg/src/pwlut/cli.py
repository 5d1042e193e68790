"""Command-line front end: ``pwlut generate|eval|study|export``.

Errors are reported as one line on stderr, ``error code=<CODE> msg=<text>``,
with exit status 2 (argument), 3 (domain or range) or 4 (I/O).  Relative
output paths are resolved against ``$PWLUT_OUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from pathlib import Path

import numpy as np

from .catalog import get_function
from .errors import ArgumentError, DomainError, ExportError, PwlutError, RangeError
from .fixedpoint import FixedPointFormat
from .hwmodel import (bram_layout, export_descriptor, export_mem_init, latency_report,
                      load_descriptor, write_atomic)
from .segmentation import ALGORITHMS, COSTS, PREDICATES, SplitConfig, plan, split
from .spacing import footprint_reduction, uniform_spacing
from .stats import STUDY_ALGORITHMS, StudyConfig, mean_reduction_study, omega_grid, \
    pairwise_tests, study_csv, ttest_csv
from .table import build_table, evaluate_fixed_detail, evaluate_real_many

OUT_DIR_ENV = "PWLUT_OUT_DIR"

EXIT_CODES = {ArgumentError: 2, DomainError: 3, RangeError: 3, ExportError: 4}

PREDICATE_TEXT = {
    "prose": "left+right < (1-omega)*parent",
    "pseudocode": "left+right < omega*parent",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _fmt_arg(text: str):
    return None if text == "auto" else FixedPointFormat.parse(text)


def _out_path(path):
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _semantics(predicate: str, cost: str) -> str:
    return f"predicate={predicate} ({PREDICATE_TEXT[predicate]}) cost={cost}"


def _g(x: float) -> str:
    return f"{x:.10g}"


def cmd_generate(args, out) -> int:
    fn = get_function(args.fn)
    in_fmt, out_fmt = _fmt_arg(args.in_fmt), _fmt_arg(args.out_fmt)
    cfg = SplitConfig(args.omega, args.ea, args.epsilon, args.predicate, args.cost)
    part = split(args.alg, fn, cfg, args.lo, args.hi)
    ref = uniform_spacing(fn, args.ea, args.lo, args.hi)
    pl = plan(fn, args.ea, part)
    table = build_table(fn, pl, in_fmt, out_fmt)
    layout = bram_layout(table)
    lat = latency_report(table, args.clock_mhz)

    eps = "-" if args.alg in ("none", "binary") else _g(cfg.sweep_step(args.lo, args.hi))
    print(f"function={fn.id} interval=[{_g(args.lo)}, {_g(args.hi)}) Ea={_g(args.ea)}", file=out)
    print(f"algorithm={args.alg} omega={_g(args.omega)} epsilon={eps} "
          f"{_semantics(args.predicate, args.cost)}", file=out)
    print("partition=" + " ".join(_g(b) for b in part.boundaries), file=out)
    print(f"S={part.n_segments}", file=out)
    print("delta=" + " ".join(_g(d) for d in pl.spacings), file=out)
    print("K=" + " ".join(str(k) for k in pl.counts), file=out)
    print(f"M_F^R={ref.kappa}", file=out)
    if args.alg == "none":
        print("reduction=0.00%", file=out)
    else:
        print(f"M_F^P={pl.total_footprint}", file=out)
        print(f"reduction={footprint_reduction(ref.kappa, pl.total_footprint):.2f}%", file=out)
    print(f"in_fmt={table.in_fmt} out_fmt={table.out_fmt} inv_fmt={table.inv_fmt}", file=out)
    print(f"bram: width={layout.entry_width} entries_per_bram={layout.entries_per_bram} "
          f"address_bits={layout.address_bits} count={layout.bram_count}", file=out)
    stages = " ".join(f"{k}={v}" for k, v in lat.stage_breakdown.items())
    print(f"latency: cycles={lat.latency_cycles} ({stages}) II={lat.initiation_interval} "
          f"clock={_g(lat.clock_mhz)}MHz eval={lat.eval_time_ns:.2f}ns "
          f"selector_depth={table.selector.depth}", file=out)
    if args.descriptor:
        print(f"descriptor={export_descriptor(table, _out_path(args.descriptor))}", file=out)
    if args.mem:
        print(f"mem={export_mem_init(table, _out_path(args.mem))}", file=out)
    return 0


def read_inputs(path) -> list:
    """Real inputs, one per line; blank lines and ``#`` comments are skipped."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from exc
    xs = []
    for n, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            x = float(text)
        except ValueError:
            raise ArgumentError(f"{path}:{n}: cannot parse {text!r} as a number") from None
        if not math.isfinite(x):
            raise ArgumentError(f"{path}:{n}: non-finite input {text!r}")
        xs.append(x)
    return xs


def cmd_eval(args, out) -> int:
    table = load_descriptor(args.descriptor)
    fn = get_function(table.fn_id)
    xs = np.array(read_inputs(args.inputs), dtype=float)
    inside = (xs >= table.x0) & (xs <= table.x_end) & fn.domain.mask(xs)
    y_real = np.full(xs.shape, np.nan)
    y_true = np.full(xs.shape, np.nan)
    y_real[inside] = evaluate_real_many(table, xs[inside])
    y_true[inside] = fn.f(xs[inside])

    dest = _out_path(args.out)
    fh = open(dest, "w", newline="", encoding="utf-8") if dest else out
    failures = 0
    max_err = max_fixed = 0.0
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y_real", "y_fixed", "abs_err", "abs_err_fixed", "status"])
        for k, x in enumerate(xs):
            if not inside[k]:
                failures += 1
                w.writerow([repr(float(x)), "", "", "", "", "error:out_of_range"])
                continue
            try:
                word, sat = evaluate_fixed_detail(table, table.in_fmt.quantize(float(x)))
            except RangeError:
                failures += 1
                w.writerow([repr(float(x)), repr(float(y_real[k])), "", "", "", "error:fixed_range"])
                continue
            yf = table.out_fmt.to_real(word)
            err = abs(float(y_true[k]) - float(y_real[k]))
            err_f = abs(float(y_true[k]) - yf)
            max_err, max_fixed = max(max_err, err), max(max_fixed, err_f)
            w.writerow([repr(float(x)), repr(float(y_real[k])), repr(yf), repr(err), repr(err_f),
                        "saturated" if sat else "ok"])
        w.writerow(["max", "", "", repr(max_err), repr(max_fixed),
                    f"failures={failures}"])
    finally:
        if fh is not out:
            fh.close()
    if failures:
        print(f"error code=RANGE msg={failures} of {len(xs)} inputs could not be evaluated",
              file=sys.stderr)
        return 3
    return 0


def cmd_study(args, out) -> int:
    omegas = omega_grid(args.omega_start, args.omega_stop, args.omega_step)
    cfg = StudyConfig(args.fn, args.lo, args.hi, args.seed, args.population, omegas,
                      args.ea, predicate=args.predicate, cost=args.cost)
    fn = get_function(args.fn)
    inner = [np.nextafter(args.lo, args.hi), np.nextafter(args.hi, args.lo)]
    if not fn.domain.contains(inner):
        raise DomainError(f"{fn.id}: base interval [{args.lo!r}, {args.hi!r}) leaves the domain")
    result = mean_reduction_study(cfg, fn=fn)
    csv_path = _out_path(args.csv or f"{fn.id}_study.csv")
    tt_path = _out_path(args.ttest_csv or f"{fn.id}_ttest.csv")
    write_atomic(csv_path, study_csv(result))
    write_atomic(tt_path, ttest_csv(result, args.alpha))

    print(f"function={fn.id} interval=[{_g(args.lo)}, {_g(args.hi)}) Ea={_g(args.ea)} "
          f"population={args.population} seed={args.seed} omegas={len(omegas)} "
          f"{_semantics(args.predicate, args.cost)} variance=pooled alpha={_g(args.alpha)}",
          file=out)
    for alg in STUDY_ALGORITHMS:
        g = result[alg]
        print(f"{alg}: mean_reduction={np.mean(g.samples):.3f}% "
              f"max={max(g.samples):.3f}% mean_segments={np.mean(g.mean_segments):.2f}", file=out)
    for a, b, right, left, flag in pairwise_tests(result, args.alpha):
        print(f"({a}, {b}): t={right.t_statistic:.4f} right={int(right.reject_h0)} "
              f"left={int(left.reject_h0)} {b}_outperforms_{a}={int(flag)}", file=out)
    print(f"study_csv={csv_path}", file=out)
    print(f"ttest_csv={tt_path}", file=out)
    return 0


def cmd_export(args, out) -> int:
    table = load_descriptor(args.descriptor)
    path = export_mem_init(table, _out_path(args.mem))
    print(f"mem={path} words={table.footprint} width={table.out_fmt.width}", file=out)
    return 0


def _split_flags(p):
    p.add_argument("--omega", type=float, default=0.3)
    p.add_argument("--epsilon", type=float, default=None,
                   help="sweep step (default: interval length / 1000)")
    p.add_argument("--predicate", choices=PREDICATES, default="prose")
    p.add_argument("--cost", choices=COSTS, default="intervals")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pwlut", description="Memory-minimised piecewise-linear lookup tables.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="segment an interval and build a table")
    g.add_argument("--fn", required=True)
    g.add_argument("--lo", type=float, required=True)
    g.add_argument("--hi", type=float, required=True)
    g.add_argument("--ea", type=float, required=True)
    g.add_argument("--alg", choices=list(ALGORITHMS), default="hierarchical")
    _split_flags(g)
    g.add_argument("--in-fmt", default="auto", help="S:W:F or auto")
    g.add_argument("--out-fmt", default="auto", help="S:W:F or auto")
    g.add_argument("--clock-mhz", type=float, default=87.5)
    g.add_argument("--descriptor", help="write the JSON table descriptor here")
    g.add_argument("--mem", help="write the hex memory-init file here")
    g.set_defaults(run=cmd_generate)

    e = sub.add_parser("eval", help="evaluate a stored table on a file of inputs")
    e.add_argument("--descriptor", required=True)
    e.add_argument("--inputs", required=True)
    e.add_argument("--out", help="CSV destination (default stdout)")
    e.set_defaults(run=cmd_eval)

    s = sub.add_parser("study", help="mean-reduction study and pairwise t-tests")
    s.add_argument("--fn", required=True)
    s.add_argument("--lo", type=float, required=True)
    s.add_argument("--hi", type=float, required=True)
    s.add_argument("--ea", type=float, default=9.5367e-7)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--population", type=int, default=100)
    s.add_argument("--omega-start", type=float, default=0.01)
    s.add_argument("--omega-stop", type=float, default=0.30)
    s.add_argument("--omega-step", type=float, default=0.01)
    s.add_argument("--predicate", choices=PREDICATES, default="prose")
    s.add_argument("--cost", choices=COSTS, default="intervals")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--csv")
    s.add_argument("--ttest-csv")
    s.set_defaults(run=cmd_study)

    x = sub.add_parser("export", help="write the memory-init file of a stored table")
    x.add_argument("--descriptor", required=True)
    x.add_argument("--mem", required=True)
    x.set_defaults(run=cmd_export)
    return parser


def _exit_code(exc: PwlutError) -> int:
    for cls, code in EXIT_CODES.items():
        if isinstance(exc, cls):
            return code
    return 2


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except PwlutError as exc:
        msg = " ".join(str(exc).split())
        print(f"error code={exc.code} msg={msg}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
