"""Command-line front-end.

Exit codes: 0 success, 1 a requested check failed, 2 unparseable input,
3 precondition violation, 4 precision exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

from . import cocycle, experiments, symbols
from .errors import HermiError, PrecisionExhausted, PreconditionError, SearchExhausted
from .groups import GroupMatrix, is_unitary, load_matrix, parse_entry
from .iquad import make_order

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRE, EXIT_PREC = 0, 1, 2, 3, 4


@dataclass
class CliConfig:
    disc: int = -4
    level: int = 4
    prec: int = cocycle.DEFAULT_PREC
    seed: int = 0
    samples: int = 100
    fmt: str = "text"

    def validate(self) -> None:
        make_order(self.disc)
        if self.level <= 0 or self.level % 4:
            raise PreconditionError(f"level must be a positive multiple of 4, got {self.level}")
        if not 16 <= self.prec <= cocycle.MAX_PREC:
            raise PreconditionError(f"precision must lie in [16, {cocycle.MAX_PREC}]")
        if self.samples < 0:
            raise PreconditionError("sample count must be non-negative")


class _ParseError(Exception):
    pass


def _default_prec() -> int:
    env = os.environ.get("HERMI_PREC")
    if env is None:
        return cocycle.DEFAULT_PREC
    try:
        return int(env)
    except ValueError:
        raise _ParseError(f"HERMI_PREC={env!r} is not an integer")


# output ---------------------------------------------------------------------

def _emit(cfg: CliConfig, record: dict, out) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        keys = list(record)
        w.writerow(keys)
        w.writerow([json.dumps(record[k]) if isinstance(record[k], (dict, list)) else record[k]
                    for k in keys])
    else:
        for k, v in record.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")


def _emit_report(cfg: CliConfig, report: experiments.SuiteReport, out) -> None:
    if cfg.fmt == "json":
        out.write(report.to_json() + "\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["case", "status", "detail"])
        for r in report.results:
            w.writerow([r["case"], r["status"], json.dumps(r["detail"], sort_keys=True)])
    else:
        out.write(f"suite {report.suite} seed={report.seed} samples={report.samples}\n")
        for r in report.results:
            d = r["detail"]
            extra = f" skipped={d['skipped']}" if "skipped" in d else ""
            out.write(f"{r['status'].upper():4} {r['case']} checked={d.get('checked')}"
                      f" failed={d.get('failed')}{extra}\n")


# commands ---------------------------------------------------------------------

def _matrix(cfg: CliConfig, source: str) -> GroupMatrix:
    try:
        return load_matrix(make_order(cfg.disc), source)
    except PreconditionError:
        raise
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise _ParseError(f"cannot read matrix {source!r}: {exc}")


def cmd_w(cfg: CliConfig, args, out) -> int:
    M, N = _matrix(cfg, args.M), _matrix(cfg, args.N)
    for X in (M, N):
        if X.size % 2 or not is_unitary(X):
            raise PreconditionError("matrices must be unitary")
    val = cocycle.w(M, N, method=args.method, prec=cfg.prec, verify=args.verify)
    _emit(cfg, {"w": val.w, "method": val.method, "certificate": val.certificate}, out)
    return EXIT_OK


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _ParseError(f"not an integer: {text!r}")


def cmd_kronecker(cfg: CliConfig, args, out) -> int:
    c, d = _int(args.c), _int(args.d)
    _emit(cfg, {"c": c, "d": d, "kronecker": symbols.kronecker(c, d)}, out)
    return EXIT_OK


def cmd_theta(cfg: CliConfig, args, out) -> int:
    try:
        m = json.loads(args.matrix) if args.matrix.lstrip().startswith("[") else \
            json.load(open(args.matrix, encoding="utf-8"))
        z = complex(args.z.replace(" ", ""))
    except (OSError, ValueError) as exc:
        raise _ParseError(str(exc))
    val = symbols.theta_multiplier(m, z, T=args.T, prec=cfg.prec, check=False)
    k = symbols.kronecker(int(m[1][0]), int(m[1][1]))
    err = float(abs(val - k))
    _emit(cfg, {"multiplier_re": float(val.real), "multiplier_im": float(val.imag),
                "kronecker": k, "error": err}, out)
    return EXIT_OK if err < 1e-8 else EXIT_FAIL


def cmd_abx(cfg: CliConfig, args, out) -> int:
    o = make_order(cfg.disc)
    try:
        a, b = parse_entry(o, args.a), parse_entry(o, args.b)
    except ValueError as exc:
        raise _ParseError(str(exc))
    if not (a.is_integral() and b.is_integral()):
        raise PreconditionError("a and b must be integral")
    from .iquad import abx_search, content
    a, b = a.to_quadint(), b.to_quadint()
    x = abx_search(a, b, bound=args.bound)
    _emit(cfg, {"a": str(a), "b": str(b), "x": str(x), "a+xb": str(a + x * b),
                "content": content(a + x * b)}, out)
    return EXIT_OK


def cmd_witness(cfg: CliConfig, args, out) -> int:
    q = cfg.level if args.q is None else _int(args.q)
    d = cfg.disc if args.d is None else _int(args.d)
    rep = experiments.witness_non_congruence(q, make_order(d))
    data = rep.to_dict()
    if cfg.fmt == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        _emit(cfg, {k: data[k] for k in ("q", "d", "c", "p", "alpha", "x", "a", "symbol")}
              | {"verified": data["verification"]["ok"]}, out)
    return EXIT_OK if data["verification"]["ok"] else EXIT_FAIL


def cmd_verify(cfg: CliConfig, args, out) -> int:
    seed = cfg.seed if args.seed is None else _int(args.seed)
    n = cfg.samples if args.n is None else _int(args.n)
    if n < 0:
        raise PreconditionError("sample count must be non-negative")
    o = make_order(cfg.disc)
    if args.suite == "lemmas":
        report = experiments.lemma_suite(seed, n, order=o, prec=cfg.prec)
    elif args.suite == "ms":
        report = experiments.ms_axiom_suite(cfg.level, o, n, seed)
    else:
        raw = symbols.rule_suite(n, seed)
        report = experiments.SuiteReport("rules", seed, n, [
            {"case": k, "status": "pass" if not v["violations"] else "fail",
             "detail": {"checked": v["checked"], "failed": len(v["violations"]),
                        "counterexamples": v["violations"][:experiments.MAX_DUMP]}}
            for k, v in raw.items()])
    _emit_report(cfg, report, out)
    return EXIT_OK if report.passed else EXIT_FAIL


# parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--disc", type=int, default=argparse.SUPPRESS,
                        help="fundamental discriminant d < 0 (default -4)")
    common.add_argument("--level", type=int, default=argparse.SUPPRESS,
                        help="level q, a positive multiple of 4 (default 4)")
    common.add_argument("--prec", type=int, default=argparse.SUPPRESS,
                        help="working precision in bits (default 128 or $HERMI_PREC)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"),
                        default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="hermi", parents=[common],
                                description="Cocycles, symbols and witnesses for Hermitian modular groups.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("w", parents=[common], help="cocycle w(M, N)")
    s.add_argument("M", help="matrix as inline JSON or a JSON file")
    s.add_argument("N")
    s.add_argument("--method", choices=("auto", "analytic", "fast"), default="auto")
    s.add_argument("--verify", action="store_true", help="cross-check closed forms analytically")
    s.set_defaults(func=cmd_w)

    s = sub.add_parser("kronecker", parents=[common], help="Kronecker symbol (c/d)")
    s.add_argument("c")
    s.add_argument("d")
    s.set_defaults(func=cmd_kronecker)

    s = sub.add_parser("theta", parents=[common], help="theta multiplier of a level-4 matrix")
    s.add_argument("matrix")
    s.add_argument("z", help="point in the upper half plane, e.g. 0.5+1j")
    s.add_argument("-T", type=int, default=40, help="truncation order")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("abx", parents=[common], help="x with a + x b primitive")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--bound", type=int, default=64)
    s.set_defaults(func=cmd_abx)

    s = sub.add_parser("witness", parents=[common], help="non-congruence witness")
    s.add_argument("q", nargs="?")
    s.add_argument("d", nargs="?")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("verify", parents=[common], help="run a reproduction suite")
    s.add_argument("suite", choices=("lemmas", "ms", "rules"))
    s.add_argument("seed", nargs="?")
    s.add_argument("n", nargs="?")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = CliConfig(prec=_default_prec())
        for key in ("disc", "level", "prec", "seed", "samples", "fmt"):
            if hasattr(args, key):
                setattr(cfg, key, getattr(args, key))
        cfg.validate()
        return args.func(cfg, args, out)
    except _ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PREC
    except (PreconditionError, SearchExhausted, HermiError) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return EXIT_PRE


if __name__ == "__main__":
    sys.exit(main())
