"""Command-line interface.

Exit codes: 0 on success (and on a passing verification), 1 when a
verification reports a failure, 2 on bad flags, unreadable input or a
kernel-side validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import factorial
from typing import Sequence

from nilmat.errors import NilmatError
from nilmat.matrices import (
    Matrix,
    det,
    is_in_D,
    is_in_dtilde,
    is_infinitesimal_simplex,
    is_special,
    mult_trace,
)
from nilmat.poly import parse_polynomial
from nilmat.quotient import (
    IdealSpec,
    algebra_dimension,
    dimension_formula,
    normal_form,
    oracle_reduce,
    oracle_total_dimension,
)
from nilmat.verifier import MODES, PROPOSITION_IDS, Budget, verify

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """A flag value that parsed but is not acceptable."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 already; keep that but name the program consistently
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> tuple[int, int]:
    try:
        m, n = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise UsageError("--grid", f"expected MxN, got {text!r}") from None
    if m < 1 or n < 1:
        raise UsageError("--grid", "dimensions must be positive")
    return m, n


def load_matrix(path: str) -> Matrix:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError("--in", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError("--in", f"{path} is not valid JSON ({exc.msg})") from None
    try:
        return Matrix.from_json(data)
    except (NilmatError, TypeError, ValueError) as exc:
        raise UsageError("--in", f"{path}: {exc}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_check(args) -> int:
    X = load_matrix(args.input)
    if args.pred == "d":
        if X.rows != 1 and X.cols != 1:
            raise UsageError("--in", f"--pred d needs a 1xn or nx1 matrix, got {X.rows}x{X.cols}")
        result = is_in_D(X)
    elif args.pred == "dtilde":
        result = is_in_dtilde(X)
    elif args.pred == "special":
        if X.rows != X.cols:
            raise UsageError("--in", "--pred special needs a square matrix")
        result = is_special(X)
    else:
        result = is_infinitesimal_simplex(X.row_list())
    _emit(args, {"predicate": args.pred, "result": result}, "true" if result else "false")
    return EXIT_OK


def cmd_nf(args) -> int:
    m, n = parse_grid(args.grid)
    try:
        p = parse_polynomial(args.expr)
    except NilmatError as exc:
        raise UsageError("--expr", str(exc)) from None
    if args.ideal == "dtilde":
        result = normal_form(p, m, n).poly
    else:
        if m != n:
            raise UsageError("--grid", "the special ideal needs a square grid")
        result = oracle_reduce(p, IdealSpec.special_only(n))
    _emit(args, {"grid": [m, n], "ideal": args.ideal, "normal_form": str(result)}, str(result))
    return EXIT_OK


def _dimension_payload(m: int, n: int, with_oracle: bool) -> dict:
    dim = algebra_dimension(m, n)
    payload = {
        "grid": [m, n],
        "dimension": dim.dimension,
        "formula": dimension_formula(m, n),
        "basis": [str(b) for b in dim.basis],
    }
    if with_oracle:
        payload["oracle"] = oracle_total_dimension(IdealSpec.full_dtilde(m, n))
    return payload


def cmd_dim(args) -> int:
    m, n = parse_grid(args.grid)
    if args.table:
        table = [_dimension_payload(r, c, args.oracle) for r in range(1, m + 1) for c in range(1, n + 1)]
        text = "\n".join(
            "\t".join(str(v) for v in (*t["grid"], t["dimension"]) + ((t["oracle"],) if args.oracle else ()))
            for t in table
        )
        _emit(args, {"table": table}, text)
        return EXIT_OK
    payload = _dimension_payload(m, n, args.oracle)
    lines = [str(payload["dimension"])]
    if args.oracle:
        lines.append(f"oracle {payload['oracle']}")
    lines += payload["basis"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_basis(args) -> int:
    m, n = parse_grid(args.grid)
    dim = algebra_dimension(m, n)
    rows = [{"label": str(b), "degree": b.degree, "representative": str(b.representative())} for b in dim.basis]
    text = "\n".join(f"{r['degree']}\t{r['label']}\t{r['representative']}" for r in rows)
    _emit(args, {"grid": [m, n], "basis": rows}, text)
    return EXIT_OK


def cmd_det(args) -> int:
    X = load_matrix(args.input)
    if X.rows != X.cols:
        raise UsageError("--in", f"determinant needs a square matrix, got {X.rows}x{X.cols}")
    d = det(X)
    t = factorial(X.rows) * mult_trace(X)
    equal = d == t
    payload = {"det": str(d), "n_factorial_trm": str(t), "equal": equal}
    text = f"det {d}\n{X.rows}!*tr_m {t}\nequal: {'true' if equal else 'false'}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = list(PROPOSITION_IDS) if args.prop == "all" else [args.prop]
    if args.prop != "all" and args.prop not in PROPOSITION_IDS:
        raise UsageError("--prop", f"unknown id {args.prop!r}")
    modes = list(MODES) if args.mode == "both" else [args.mode]
    budget = Budget(cases=args.cases, seed=args.seed, max_dim=args.max_dim,
                    symbolic_max_dim=args.symbolic_max_dim, max_degree=args.max_degree)
    try:
        budget.validate()
    except NilmatError as exc:
        raise UsageError("--cases/--max-dim", str(exc)) from None
    failed = False
    for pid in ids:
        for mode in modes:
            report = verify(pid, mode, budget, mutate=args.mutate)
            print(report.to_json() if args.json else report.summary(), flush=True)
            failed |= report.status == "fail"
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilmat", description="Nilpotent matrices: membership, normal forms, verification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "test a matrix against a predicate")
    p.add_argument("--pred", required=True, choices=("d", "dtilde", "special", "simplex"))
    p.add_argument("--in", dest="input", required=True, metavar="FILE", help="matrix JSON")

    p = add("nf", cmd_nf, "normal form of a polynomial in the generic algebra")
    p.add_argument("--grid", required=True, metavar="MxN")
    p.add_argument("--expr", required=True)
    p.add_argument("--ideal", choices=("dtilde", "special"), default="dtilde")

    p = add("dim", cmd_dim, "dimension and basis of the generic algebra")
    p.add_argument("--grid", required=True, metavar="MxN")
    p.add_argument("--oracle", action="store_true", help="also compute the dimension by elimination")
    p.add_argument("--table", action="store_true", help="TSV 'm n dim' for every grid up to MxN")

    p = add("basis", cmd_basis, "basis classes with representative monomials")
    p.add_argument("--grid", required=True, metavar="MxN")

    p = add("det", cmd_det, "compare det(X) with n! times the multiplicative trace")
    p.add_argument("--in", dest="input", required=True, metavar="FILE", help="matrix JSON")

    p = add("verify", cmd_verify, "run proposition checks")
    p.add_argument("--prop", default="all", help="proposition id or 'all'")
    p.add_argument("--mode", choices=("randomized", "symbolic", "both"), default="both")
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--symbolic-max-dim", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--mutate", action="store_true", help="feed inputs violating the hypothesis")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nilmat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NilmatError as exc:
        print(f"nilmat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
