"""Command-line front end.

Exit codes: 0 pass or consistent, 1 property false, 2 usage or parse error,
3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fixtures
from .checks import DEFAULT_SAMPLES, Outcome, Verdict, check_jordan_osserman, check_osserman
from .curvature import CliffordFamily, validate_family, validate_tensor, assemble
from .duality import (
    DualityWitness,
    PreconditionError,
    certify_total_jacobi_dual,
    check_jacobi_dual,
    check_total_jacobi_dual,
    isotropic_supplement,
)
from .linalg import format_rational
from .problem import Problem, ProblemError, format_json, load_problem, save_problem, strings
from .spectral import IrrationalSpectrum

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
PROPERTIES = ("osserman", "jordan-osserman", "jacobi-dual", "total-jacobi-dual")


class UsageError(Exception):
    pass


class NoCertificate(Exception):
    """The structural certificate does not apply to this input."""


def _vec(v) -> list:
    return strings(v)


def verdict_json(v: Verdict) -> dict:
    witnesses = []
    for w in v.witnesses:
        if isinstance(w, DualityWitness):
            witnesses.append({"X": _vec(w.X), "Y": _vec(w.Y), "lambda": format_rational(w.lam),
                              "J_Y(X)": _vec(w.jY_of_X)})
        else:
            witnesses.append(_vec(w))
    out = {
        "property": v.property,
        "outcome": v.outcome.value,
        "samples": v.samples,
        "seed": v.seed,
        "witnesses": witnesses,
        "charpoly": v.charpoly.strings() if v.charpoly is not None else [],
        "reason": v.reason,
    }
    if "charpolys" in v.details:
        out["witness_charpolys"] = [p.strings() for p in v.details["charpolys"]]
    if "jordan" in v.details:
        out["jordan"] = _jordan_json(v.details["jordan"])
    return out


def _jordan_json(j):
    if isinstance(j, list):
        return [_jordan_json(x) for x in j]
    return {format_rational(k): list(b) for k, b in j.items()}


def _print_verdict(v: Verdict) -> None:
    print(v)
    if v.charpoly is not None:
        print(f"  charpoly: {v.charpoly}")
    for w in v.witnesses:
        if isinstance(w, DualityWitness):
            print(f"  X = {_fmt(w.X)}")
            print(f"  Y = {_fmt(w.Y)}  (eigenvalue {format_rational(w.lam)})")
            print(f"  J_Y(X) = {_fmt(w.jY_of_X)}")
        else:
            print(f"  witness {_fmt(w)}")
    for p in v.details.get("charpolys", []):
        print(f"  charpoly at witness: {p}")
    for j in v.details.get("jordan", []) if isinstance(v.details.get("jordan"), list) else []:
        print(f"  jordan blocks at witness: {_jordan_json(j)}")


def _fmt(v) -> str:
    return "(" + ", ".join(strings(v)) + ")"


def _exit_code(v: Verdict) -> int:
    return EXIT_FALSE if v.outcome is Outcome.FALSE else EXIT_OK


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    problem = load_problem(args.path)
    reports = []
    if problem.family is not None:
        reports.append(("family", validate_family(problem.family)))
        if problem.dense is None and all(c.passed for c in reports[0][1].checks if c.name.endswith("skew-adjoint")):
            reports.append(("tensor", validate_tensor(assemble(problem.family))))
    if problem.dense is not None:
        reports.append(("tensor", validate_tensor(problem.dense)))
    ok = all(r.ok for _, r in reports)
    if args.json:
        print(json.dumps({
            "ok": ok,
            "reports": [{"object": name, "ok": r.ok, "kind": r.kind, "k": r.k, "m": r.m,
                         "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                                     "where": list(c.where) if c.where else None} for c in r.checks]}
                        for name, r in reports],
        }, indent=2, ensure_ascii=False))
    else:
        for name, r in reports:
            print(f"[{name}]")
            for c in r.checks:
                print("  " + c.describe())
            if r.kind is not None:
                print(f"  {r.kind}, k={r.k}, m={r.m}" if r.ok else f"  not a valid {r.kind} family")
        print("valid" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_FALSE


def run_check(problem: Problem, prop: str, *, seed, samples: int = DEFAULT_SAMPLES, side: str | None = None,
              backend: str = "exact", certify: bool = False) -> Verdict:
    if backend == "float":
        problem = problem.with_backend(False)
    model = problem.model
    extra = list(problem.vectors.values())
    if certify:
        if not isinstance(model, CliffordFamily):
            raise UsageError("--certify needs a family, not a dense tensor")
        if prop not in ("osserman", "total-jacobi-dual"):
            raise UsageError(f"no certificate path for {prop}")
        try:
            if prop == "osserman":
                return check_osserman(model, "certify")
            return certify_total_jacobi_dual(model)
        except ValueError as exc:
            raise NoCertificate(str(exc)) from None
    if prop == "osserman":
        return check_osserman(model, samples=samples, seed=seed, extra=extra)
    if prop == "jordan-osserman":
        if side is None:
            raise UsageError("jordan-osserman needs --side spacelike|timelike")
        return check_jordan_osserman(model, side, samples, seed, extra=extra)
    if prop == "jacobi-dual":
        return check_jacobi_dual(model, samples, seed, extra=extra)
    if prop == "total-jacobi-dual":
        return check_total_jacobi_dual(model, samples, seed, extra=extra)
    raise UsageError(f"unknown property {prop!r}")


def cmd_check(args) -> int:
    problem = load_problem(args.path)
    if args.side is not None and args.property != "jordan-osserman":
        raise UsageError("--side only applies to jordan-osserman")
    try:
        v = run_check(problem, args.property, seed=args.seed, samples=args.samples, side=args.side,
                      backend=args.backend, certify=args.certify)
    except IrrationalSpectrum as exc:
        return _inconclusive(args, f"irrational spectrum: {exc}")
    except NoCertificate as exc:
        return _inconclusive(args, str(exc))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(format_json(verdict_json(v)))
    else:
        _print_verdict(v)
    return _exit_code(v)


def _inconclusive(args, reason: str) -> int:
    if args.json:
        print(json.dumps({"property": args.property, "outcome": "inconclusive", "samples": 0, "seed": args.seed,
                          "witnesses": [], "charpoly": [], "reason": reason}, indent=2, ensure_ascii=False))
    else:
        print(f"{args.property}: inconclusive - {reason}")
    return EXIT_INCONCLUSIVE


def cmd_reproduce(args) -> int:
    try:
        example = fixtures.build(args.key)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    results = example.reproduce()
    width = max((len(r.name) for r in results), default=0)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  expected {r.expected}  observed {r.observed}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} facts reproduced")
    return EXIT_OK if not failed else EXIT_FALSE


def cmd_isotropic(args) -> int:
    problem = load_problem(args.path)
    missing = [n for n in args.vectors if n not in problem.vectors]
    if missing:
        raise UsageError(f"unknown vectors: {', '.join(missing)}; the file has {', '.join(problem.vectors) or 'none'}")
    space = problem.space
    N = [problem.vectors[n] for n in args.vectors]
    try:
        M = isotropic_supplement(space, N)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}")
        return EXIT_FALSE
    for i, n in enumerate(N):
        for j, m in enumerate(M):
            if space.inner(n, m) != (1 if i == j else 0) or space.inner(M[i], m) != 0:
                print(f"pairing check failed at ({i + 1}, {j + 1})")
                return EXIT_FALSE
    for name, m in zip(args.vectors, M):
        print(f"M[{name}] = {_fmt(m)}")
    if M:
        print(f"verified g(N_i, M_j) = δ_ij and g(M_i, M_j) = 0 for {len(M)} vectors")
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        example = fixtures.build(args.key)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    save_problem(fixtures.as_problem(example), args.path)
    print(f"wrote {args.path}")
    return EXIT_OK


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="osserman", description="Check Osserman-type properties of algebraic curvature tensors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check tensor symmetries and the Hurwitz relations")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="decide a property by certificate or seeded sampling")
    p.add_argument("path")
    p.add_argument("property", choices=PROPERTIES)
    p.add_argument("--seed", required=True, help="sampling seed (required for reproducibility)")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--side", choices=("spacelike", "timelike"))
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--certify", action="store_true", help="use the structural certificate instead of sampling")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reproduce", help="rebuild a named example and re-verify its facts")
    p.add_argument("key", help=", ".join(fixtures.EXAMPLES))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("isotropic", help="isotropic supplement of named null vectors")
    p.add_argument("path")
    p.add_argument("--vectors", nargs="*", default=[])
    p.set_defaults(func=cmd_isotropic)

    p = sub.add_parser("export", help="write a named example as a problem file")
    p.add_argument("key")
    p.add_argument("path")
    p.set_defaults(func=cmd_export)
    return parser


def _seed(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "seed"):
            args.seed = _seed(args.seed)
            if args.samples < 0:
                raise UsageError("--samples must be non-negative")
        return args.func(args)
    except UsageError as exc:
        print(f"osserman: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProblemError as exc:
        print(f"osserman: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
