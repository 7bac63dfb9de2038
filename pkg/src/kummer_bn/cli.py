"""Command-line entry point: ``kummer-bn <verb> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 subdivisor budget exhausted while checking a single divisor.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chern import bundle_invariants
from .involution import is_theta_invariant, theta
from .lattice import LABELS, LatticeError, format_divisor, gram_csv, pair, parse_divisor
from .predicates import DEFAULT_BUDGET
from .search import CSV_FIELDS, Family, SearchParams, csv_row, enumerate_examples, make_record, write_records
from .verify import verify_configuration

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

DEFAULTS = {
    "max_degree": 3,
    "max_coeff": 3,
    "family": "nodes",
    "budget": DEFAULT_BUDGET,
    "include_failures": False,
    "canonicalize": False,
    "format": "json",
    "jobs": 1,
}
_BOOL_KEYS = {"include_failures", "canonicalize"}
_INT_KEYS = {"max_degree", "max_coeff", "budget", "jobs"}


def read_config(path: str | Path) -> dict:
    """Parse a ``key = value`` file; keys may use dashes or underscores."""
    out: dict = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise ValueError(f"{path}:{n}: unknown key {key!r}")
        if key in _BOOL_KEYS:
            out[key] = value.lower() in ("1", "true", "yes", "on")
        elif key in _INT_KEYS:
            out[key] = int(value)
        else:
            out[key] = value
    return out


def _options(args: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if args.config:
        opts.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    return opts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file mirroring the flags (flags win)")
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)
    common.add_argument("--budget", type=int, default=None, help="subdivisor enumeration cap")

    parser = argparse.ArgumentParser(prog="kummer-bn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    for verb, helptext in [
        ("check", "check the three hypotheses for one divisor"),
        ("invariants", "Chern data of the pushforward bundle"),
        ("theta", "image under the involution"),
        ("invariant", "is the class theta-invariant"),
    ]:
        p = sub.add_parser(verb, parents=[common], help=helptext)
        p.add_argument("expr")

    p = sub.add_parser("pair", parents=[common], help="intersection number of two divisors")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("enumerate", parents=[common], help="search a divisor family")
    p.add_argument("--family", choices=[f.value for f in Family], default=None)
    p.add_argument("--max-degree", dest="max_degree", type=int, default=None)
    p.add_argument("--max-coeff", dest="max_coeff", type=int, default=None)
    p.add_argument("--include-failures", dest="include_failures", action="store_true", default=None)
    p.add_argument("--canonicalize", action="store_true", default=None)
    p.add_argument("--jobs", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="run the self-verification suite")
    p.add_argument("--quick", action="store_true")

    sub.add_parser("export-gram", parents=[common], help="Gram matrix as CSV")
    return parser


def _emit(line: str) -> None:
    sys.stdout.write(line + "\n")


def _cmd_check(args, opts) -> int:
    d = parse_divisor(args.expr)
    rec = make_record(d, opts["budget"])
    r = rec.report
    if opts["format"] == "json":
        _emit(rec.to_json())
    elif opts["format"] == "csv":
        _emit(",".join(CSV_FIELDS))
        _emit(csv_row(rec))
    else:
        order = r.cond_i.peeling_order
        _emit(f"divisor      {rec.divisor}")
        _emit(f"(i)   h0=1   {r.cond_i.status}"
              + (f"  peeling: {', '.join(LABELS[k] for k in order)}" if order else ""))
        w = r.cond_ii.witness
        _emit(f"(ii)  no invariant subdivisor   {r.cond_ii.status}"
              + (f"  witness: {format_divisor(w)}" if w is not None else ""))
        _emit(f"(iii) D^2 = {r.self_int} < -4   {r.cond_iii}")
        _emit(f"overall      {r.overall}")
    return EXIT_BUDGET if r.cond_ii.status == "budget" else EXIT_OK


def _cmd_invariants(args, opts) -> int:
    d = parse_divisor(args.expr)
    inv = bundle_invariants(d)
    if opts["format"] == "json":
        _emit(json.dumps({"divisor": format_divisor(d), **inv.as_dict()}, separators=(", ", ": ")))
    elif opts["format"] == "csv":
        _emit(",".join(CSV_FIELDS))
        fields = inv.as_dict()
        _emit(",".join([f'"{format_divisor(d)}"'] + [str(fields[k]) for k in CSV_FIELDS[1:]]))
    else:
        for key, value in inv.as_dict().items():
            label = f"{key} (proxy: dim M_H replaced by its lower bound)" if key == "rho1" else key
            _emit(f"{label}: {value}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        opts = _options(args)
        verb = args.verb
        if verb == "check":
            return _cmd_check(args, opts)
        if verb == "invariants":
            return _cmd_invariants(args, opts)
        if verb == "theta":
            _emit(format_divisor(theta(parse_divisor(args.expr, allow_negative=True))))
            return EXIT_OK
        if verb == "invariant":
            _emit(str(is_theta_invariant(parse_divisor(args.expr, allow_negative=True))).lower())
            return EXIT_OK
        if verb == "pair":
            a = parse_divisor(args.a, allow_negative=True)
            b = parse_divisor(args.b, allow_negative=True)
            _emit(str(pair(a, b)))
            return EXIT_OK
        if verb == "enumerate":
            params = SearchParams(
                family=opts["family"],
                max_degree=opts["max_degree"],
                max_coeff=opts["max_coeff"],
                budget=opts["budget"],
                canonicalize=opts["canonicalize"],
                include_failures=opts["include_failures"],
            )
            write_records(enumerate_examples(params, jobs=opts["jobs"]), opts["format"], _emit)
            return EXIT_OK
        if verb == "verify":
            report = verify_configuration(quick=args.quick)
            for line in report.lines():
                _emit(line)
            return EXIT_OK if report.ok else EXIT_VERIFY
        if verb == "export-gram":
            sys.stdout.write(gram_csv())
            return EXIT_OK
    except (LatticeError, ValueError, OSError) as exc:
        print(f"kummer-bn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
