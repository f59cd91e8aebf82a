"""Command-line front end: enumeration, construction, and verification as
reproducible JSON-emitting commands.

Exit codes: 0 success, 1 verification failure, 2 non-generic parameters,
3 invalid input.  Identical flags and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from . import selfcheck as selfcheck_mod
from .algebra import (AlgebraVariant, InfiniteAlgebraError,
                      basis_enumerate, dimension_closed_form)
from .projectors import (build_projector_Q, gamma_residuals,
                         gamma_solve, gamma_table_conjecture,
                         projector_certificate)
from .reps import StandardModule, central_matrix, central_eigenvalue
from .scalars import (NonGenericParameterError, ParamEnv, sample_env,
                      scalar_to_json, validate_env)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NONGENERIC = 2
EXIT_INVALID = 3

ALGEBRA_NAMES = {
    "uatl": "uaTL", "uptl": "upTL", "uatl1": "uaTL1", "uptl1": "upTL1",
    "uatl2": "uaTL2", "uptl2": "upTL2", "tl": "TL", "atl": "aTL",
    "ptl": "pTL",
}


def _parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _build_env(args, kind: str, n: int) -> ParamEnv:
    env = sample_env(args.seed, kind, n)
    overrides = {}
    if getattr(args, "q_half", None):
        overrides["s"] = _parse_rational(args.q_half)
    if getattr(args, "alpha", None):
        overrides["alpha"] = _parse_rational(args.alpha)
    if getattr(args, "gamma", None):
        overrides["gamma"] = _parse_rational(args.gamma)
    if getattr(args, "gamma_root", None):
        w = _parse_rational(args.gamma_root)
        overrides["omega"] = w
        overrides["gamma"] = w ** n
    if getattr(args, "z", None):
        overrides["z"] = _parse_rational(args.z)
    if overrides:
        env = replace(env, **overrides)
        validate_env(env, kind, n)
    return env


def _emit(doc, args) -> None:
    if getattr(args, "format", "json") == "art" and "art" in doc:
        print(doc["art"])
    else:
        print(json.dumps(doc, sort_keys=True))


def cmd_dims(args) -> int:
    kind = ALGEBRA_NAMES[args.algebra]
    out = {"algebra": args.algebra, "results": []}
    ns = [args.n] if args.n else list(range(1, args.max_n + 1))
    ok = True
    for n in ns:
        try:
            variant = AlgebraVariant(kind, n)
        except ValueError:
            continue
        closed = dimension_closed_form(variant)
        row = {"n": n, "closed_form": closed}
        if args.enumerate:
            enum = len(basis_enumerate(variant))
            row["enumerated"] = enum
            row["match"] = enum == closed
            ok = ok and row["match"]
        out["results"].append(row)
    _emit(out, args)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_basis(args) -> int:
    kind = ALGEBRA_NAMES[args.algebra]
    variant = AlgebraVariant(kind, args.n)
    basis = basis_enumerate(variant)
    doc = {
        "algebra": args.algebra,
        "n": args.n,
        "dimension": len(basis),
        "basis": [d.to_json() for d in basis],
        "art": "\n".join(d.art() for d in basis),
    }
    _emit(doc, args)
    return EXIT_OK


def cmd_gamma(args) -> int:
    kind = ALGEBRA_NAMES[args.algebra]
    variant = AlgebraVariant(kind, args.n)
    env = _build_env(args, kind, args.n)
    r = args.r
    doc = {"algebra": args.algebra, "n": args.n, "r": r,
           "env": env.to_json(), "method": args.method}
    code = EXIT_OK
    if args.method in ("solver", "both"):
        ts = gamma_solve(variant, args.n, r, env)
        doc["solver"] = ts.to_json()
        res = gamma_residuals(ts)
        doc["solver_residuals_zero"] = all(env.is_zero(v)
                                           for v in res.values())
        if not doc["solver_residuals_zero"]:
            code = EXIT_VERIFY
    if args.method in ("conjecture", "both"):
        tc = gamma_table_conjecture(variant, args.n, r, env)
        doc["conjecture"] = tc.to_json()
    if args.method == "both":
        diff = ts.diff(tc)
        doc["diff"] = [{"k": k, "l2": l2, "value": scalar_to_json(v)}
                       for (k, l2), v in sorted(diff.items())]
        doc["match"] = all(env.is_zero(v) for v in diff.values())
        if not doc["match"]:
            code = EXIT_VERIFY
    _emit(doc, args)
    return code


def cmd_projector(args) -> int:
    kind = ALGEBRA_NAMES[args.algebra]
    variant = AlgebraVariant(kind, args.n)
    env = _build_env(args, kind, args.n)
    method = args.method
    if args.verify or args.oracle:
        cert = projector_certificate(variant, args.n, args.r, env,
                                     method=method, with_oracle=args.oracle)
        _emit(cert, args)
        return EXIT_OK if cert["verified"] else EXIT_VERIFY
    q = build_projector_Q(variant, args.n, args.r, method, env)
    doc = {"algebra": args.algebra, "n": args.n, "r": args.r,
           "env": env.to_json(), "projector": q.to_json()}
    _emit(doc, args)
    return EXIT_OK


def cmd_central(args) -> int:
    kind = ALGEBRA_NAMES.get(args.algebra, "aTL") if args.algebra else "aTL"
    n = args.n
    env = _build_env(args, "aTL", n)
    if args.d is None:
        ds = list(range(n % 2, n + 1, 2))
    else:
        ds = [args.d]
    k = Fraction(args.k) if args.k else None
    results = []
    ok = True
    for d in ds:
        module = StandardModule(n, d, env.z, env)
        mat = central_matrix(n, args.which, module, k)
        val = central_eigenvalue(args.which, module, k)
        match = all(env.eq(mat[i][j], val if i == j else 0)
                    for i in range(len(mat)) for j in range(len(mat)))
        ok = ok and match
        results.append({"d": d, "eigenvalue": scalar_to_json(val),
                        "scalar_action": match})
    doc = {"which": args.which, "n": n, "k": args.k, "env": env.to_json(),
           "results": results}
    _emit(doc, args)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_selfcheck(args) -> int:
    report = selfcheck_mod.run_selfcheck(max_n=args.max_n, seed=args.seed)
    doc = {"max_n": args.max_n, "seed": args.seed,
           "checks": [{"name": name, "passed": okc, "detail": detail}
                      for (name, okc, detail) in report],
           "passed": all(okc for (_, okc, _) in report)}
    _emit(doc, args)
    return EXIT_OK if doc["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="utl",
        description="uncoiled Temperley-Lieb algebras: enumeration, "
                    "projectors, verification")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("--algebra", choices=sorted(ALGEBRA_NAMES),
                            required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--q-half", dest="q_half", metavar="P/Q")
        sp.add_argument("--alpha", metavar="P/Q")
        sp.add_argument("--gamma", metavar="P/Q")
        sp.add_argument("--gamma-root", dest="gamma_root", metavar="P/Q",
                        help="omega; sets gamma = omega^n")
        sp.add_argument("--z", metavar="P/Q")
        sp.add_argument("--format", choices=("json", "art"), default="json")

    sp = sub.add_parser("dims", help="closed-form vs enumerated dimensions")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--max-n", dest="max_n", type=int, default=10)
    sp.add_argument("--enumerate", action="store_true")
    sp.set_defaults(func=cmd_dims)

    sp = sub.add_parser("basis", help="dump the sandwich basis")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("gamma", help="Gamma coefficient tables")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--method", choices=("solver", "conjecture", "both"),
                    default="both")
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("projector", help="build and verify Q")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--method", choices=("solver", "conjecture"),
                    default="solver")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--oracle", action="store_true")
    sp.set_defaults(func=cmd_projector)

    sp = sub.add_parser("central", help="central element eigenvalue checks")
    common(sp, algebra=False)
    sp.add_argument("--algebra", choices=sorted(ALGEBRA_NAMES))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int)
    sp.add_argument("--which", choices=("F", "Fbar", "G", "H", "OmegaN"),
                    required=True)
    sp.add_argument("--k", help="Chebyshev index for H (rational)")
    sp.set_defaults(func=cmd_central)

    sp = sub.add_parser("selfcheck", help="run the acceptance battery")
    common(sp, algebra=False)
    sp.add_argument("--max-n", dest="max_n", type=int, default=4)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except NonGenericParameterError as exc:
        print(json.dumps({"error": "non-generic parameters",
                          "detail": str(exc)}), file=sys.stderr)
        return EXIT_NONGENERIC
    except (ValueError, InfiniteAlgebraError, KeyError) as exc:
        print(json.dumps({"error": "invalid input", "detail": str(exc)}),
              file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
