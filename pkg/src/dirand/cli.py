"""Command-line front end.

Subcommands: maxval, entropy, sweep, tune, search, tables.  Exit code 0
only when every requested solve ended Optimal; 1 on solver failure; 2 on
usage errors (argparse convention).
"""

import argparse
import json
import math
import os
import sys


def _set_thread_env():
    n = os.environ.get("DIRAND_THREADS")
    if n:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, n)


_set_thread_env()

from .bell import catalog, catalog_names, classical_bound  # noqa: E402
from .certify import (certificate_names, guessing_probability,  # noqa: E402
                      local_guessing_probability, make_certificate,
                      quantum_max, sweep_noise, tune_parameter)
from . import search as search_mod  # noqa: E402
from . import tables as tables_mod  # noqa: E402


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _parse_p_list(spec: str):
    return [float(tok) for tok in spec.split(",") if tok]


def _fmt(v: float, digits: int) -> str:
    return f"{v:.{digits}g}"


def cmd_maxval(args) -> int:
    op = catalog(args.op, n=args.n)
    if not op.joint.any():
        print("0 (zero operator)")
        return 0
    try:
        val = quantum_max(op, level=args.level)
    except RuntimeError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1
    print(f"{op.name or args.op} {args.level} maximum: "
          f"{_fmt(val, args.digits)}  (classical {classical_bound(op):g})")
    return 0


def cmd_entropy(args) -> int:
    cert = make_certificate(args.cert)
    fn = local_guessing_probability if args.local else guessing_probability
    res = fn(cert, args.p, param=args.param, level=args.level, mode=args.mode)
    if args.format == "json":
        _write(json.dumps({
            "certificate": cert.name, "p": args.p, "param": args.param,
            "pair": list(res.pair), "guessing_probability":
                res.guessing_probability, "min_entropy": res.min_entropy,
            "statuses": res.statuses}, indent=2), args.output)
    else:
        _write(f"{cert.name} p={args.p:g}"
               + (f" {cert.param_name}={args.param:g}" if args.param is not None
                  else "")
               + f": min_entropy={_fmt(res.min_entropy, args.digits)}"
               f" g={_fmt(res.guessing_probability, args.digits)}"
               f" pair={res.pair}", args.output)
    return 0 if res.ok else 1

def cmd_sweep(args) -> int:
    cert = make_certificate(args.cert)
    p_list = _parse_p_list(args.p)
    if args.tuned:
        policy = "tuned"
    elif args.param is not None:
        policy = args.param
    else:
        policy = None
    results = sweep_noise(cert, p_list, params_policy=policy,
                          level=args.level, mode=args.mode)
    lines = ["p,param,min_entropy,ok"]
    ok_all = True
    for p, res in zip(p_list, results):
        ok_all &= res.ok
        param = res.param
        lines.append(f"{p:g},{'' if param is None else f'{param:g}'},"
                     f"{_fmt(res.min_entropy, args.digits)},{int(res.ok)}")
        if not res.ok:
            print(f"solver failure at p={p:g}", file=sys.stderr)
    _write("\n".join(lines) + "\n", args.output)
    return 0 if ok_all else 1


def cmd_tune(args) -> int:
    cert = make_certificate(args.cert)
    if cert.param_name is None:
        print(f"certificate {cert.name} has no tunable parameter",
              file=sys.stderr)
        return 2
    param, res = tune_parameter(cert, args.p, level=args.level, mode=args.mode)
    shown = param / args.p if cert.param_name == "C" else param
    label = "C/p" if cert.param_name == "C" else cert.param_name
    _write(f"{cert.name} p={args.p:g}: {label}*={_fmt(shown, args.digits)} "
           f"min_entropy={_fmt(res.min_entropy, args.digits)}", args.output)
    return 0 if res.ok else 1


def cmd_search(args) -> int:
    cfg = search_mod.SearchConfig(sample_count=args.n, seed=args.seed,
                                  p=args.p, bin_width=args.bin_width,
                                  top_threshold=args.threshold)
    rep = search_mod.run_search(cfg)
    _write(rep.to_csv(), args.output)
    if args.classes_output:
        _write(rep.top_classes_json(), args.classes_output)
    print(f"evaluated={rep.evaluated} degenerate={rep.degenerate} "
          f"skipped={rep.skipped} top_classes={len(rep.top_classes)}",
          file=sys.stderr)
    return 0 if rep.skipped == 0 else 1


def cmd_tables(args) -> int:
    names = tables_mod.table_names() if args.all else args.table
    if not names:
        print("no tables requested (use --table NAME or --all)",
              file=sys.stderr)
        return 2
    ok_all = True
    for name in names:
        result = tables_mod.compute_table(name)
        csv_text = tables_mod.table_to_csv(result, digits=args.digits)
        if args.outdir:
            os.makedirs(args.outdir, exist_ok=True)
            _write(csv_text, os.path.join(args.outdir, f"{name}.csv"))
        else:
            print(f"# {name}")
            print(csv_text)
        diff_lines = ["p,column,computed,reference,deviation,ok"]
        for p, col, got, want, dev, ok in tables_mod.diff_report(result):
            ok_all &= ok
            diff_lines.append(f"{p:g},{col},{got:.6g},{want:g},{dev:.2g},"
                              f"{int(ok)}")
            if ok and not math.isnan(dev) and dev > args.warn_above:
                print(f"warning: {name} p={p:g} {col} deviates by {dev:.2g}",
                      file=sys.stderr)
        diff_text = "\n".join(diff_lines) + "\n"
        if args.outdir:
            _write(diff_text, os.path.join(args.outdir, f"{name}_diff.csv"))
        else:
            print(diff_text)
    return 0 if ok_all else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dirand",
        description="Device-independent min-entropy bounds from "
                    "Bell-operator constraints under white noise.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--level", default="Q2",
                       help="relaxation level: Q1, Q1+AB or Q2")
        p.add_argument("--digits", type=int, default=6)
        p.add_argument("--output", default=None, help="output file path")

    p = sub.add_parser("maxval", help="certified relaxation maximum")
    p.add_argument("--op", required=True,
                   help=f"operator name ({', '.join(catalog_names())})")
    p.add_argument("--n", type=int, default=None,
                   help="chain length for the bc family")
    common(p)
    p.set_defaults(fn=cmd_maxval)

    p = sub.add_parser("entropy", help="min-entropy at a single noise point")
    p.add_argument("--cert", required=True,
                   help=f"certificate ({', '.join(certificate_names())})")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--param", "--phi", "--C", dest="param", type=float,
                   default=None)
    p.add_argument("--mode", choices=("eq", "geq"), default="eq")
    p.add_argument("--local", action="store_true",
                   help="single-party outcome instead of the pair")
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    common(p)
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("sweep", help="min-entropy over a noise grid")
    p.add_argument("--cert", required=True)
    p.add_argument("--p", required=True, help="comma-separated noise values")
    p.add_argument("--param", "--phi", "--C", dest="param", type=float,
                   default=None)
    p.add_argument("--tuned", action="store_true",
                   help="re-tune the parameter at every noise point")
    p.add_argument("--mode", choices=("eq", "geq"), default="eq")
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("tune", help="optimize a certificate parameter")
    p.add_argument("--cert", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--mode", choices=("eq", "geq"), default="eq")
    common(p)
    p.set_defaults(fn=cmd_tune)

    p = sub.add_parser("search", help="randomized operator exploration")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.95)
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--threshold", type=float, default=0.72)
    p.add_argument("--classes-output", default=None,
                   help="write top-class JSON here")
    common(p)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("tables", help="reproduce published tables as CSV")
    p.add_argument("--table", action="append", default=[],
                   choices=tables_mod.table_names())
    p.add_argument("--all", action="store_true")
    p.add_argument("--outdir", default=None)
    p.add_argument("--warn-above", type=float, default=1e-2)
    p.add_argument("--digits", type=int, default=6)
    p.set_defaults(fn=cmd_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
