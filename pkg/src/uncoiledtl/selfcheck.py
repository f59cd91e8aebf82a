"""The self-contained verification battery behind `utl selfcheck`.

Each check returns (name, passed, detail).  Sizes are bounded by max_n so
the default run stays interactive; the pytest acceptance suite runs the
same checks at the full spec sizes.

Testing hook: when the environment variable UTL_FAULT_INJECT is set to
"gamma", one solved Gamma entry is perturbed before verification, which
must flip the exit code to 1.
"""

from __future__ import annotations

import os

from .algebra import Algebra, AlgebraVariant, basis_enumerate, \
    dimension_closed_form
from .projectors import (build_projector_Q, check_e0Z,
                         gamma_residuals, gamma_solve,
                         gamma_table_conjecture, projector_oracle,
                         wenzl_jones_P)
from .reps import StandardModule, central_eigenvalue, central_matrix
from .scalars import sample_env

UNCOILED = ("uaTL", "upTL", "uaTL1", "upTL1", "uaTL2", "upTL2")


def _legal_sizes(kind: str, max_n: int):
    start = 3 if kind in ("uaTL", "upTL") else 2
    return range(start, max_n + 1, 2)


def _sector(kind, env, n):
    if kind == "uaTL1":
        return 0 if env.omega == 1 else n // 2
    return 0 if kind.startswith("ua") else None


def _maybe_corrupt(tbl):
    if os.environ.get("UTL_FAULT_INJECT") == "gamma":
        key = max(tbl.entries)
        tbl.entries[key] = tbl.entries[key] + 1
    return tbl


def check_dimensions(max_n: int, seed: int):
    for kind in UNCOILED:
        for n in _legal_sizes(kind, max_n):
            v = AlgebraVariant(kind, n)
            if len(basis_enumerate(v)) != dimension_closed_form(v):
                return ("dimensions", False, f"{kind} n={n}")
    return ("dimensions", True, f"all uncoiled variants, n <= {max_n}")


def check_relations(max_n: int, seed: int):
    for n in range(3, max_n + 1):
        env = sample_env(seed, "aTL", n)
        alg = Algebra(AlgebraVariant("aTL", n), env)
        om, omi = alg.omega(), alg.omega(-1)
        beta = env.beta
        for j in range(n):
            ej = alg.e(j)
            if not (ej * ej - beta * ej).is_zero():
                return ("defining-relations", False, f"e_{j}^2, n={n}")
            for pm in (1, n - 1):
                ek = alg.e((j + pm) % n)
                if not (ej * ek * ej - ej).is_zero():
                    return ("defining-relations", False, f"eee, n={n}")
            if not (om * ej * omi - alg.e((j - 1) % n)).is_zero():
                return ("defining-relations", False, f"conjugation, n={n}")
        for i in range(n):
            for j in range(n):
                dist = min((i - j) % n, (j - i) % n)
                if dist > 1:
                    ei, ej = alg.e(i), alg.e(j)
                    if not (ei * ej - ej * ei).is_zero():
                        return ("defining-relations", False,
                                f"commutation, n={n}")
        word = alg.one()
        for j in range(n - 1, 0, -1):
            word = word * alg.e(j)
        if not (om * om * alg.e(1) - word).is_zero():
            return ("defining-relations", False, f"Omega^2 e_1, n={n}")
    return ("defining-relations", True, f"3 <= n <= {max_n}")


def check_quotient_relations(max_n: int, seed: int):
    for kind in UNCOILED:
        for n in _legal_sizes(kind, max_n):
            env = sample_env(seed, kind, n)
            alg = Algebra(AlgebraVariant(kind, n), env)
            if kind.startswith("ua"):
                target = {"uaTL": env.gamma, "uaTL1": 1,
                          "uaTL2": env.gamma}[kind]
                if not (alg.omega(n) - target * alg.one()).is_zero():
                    return ("quotient-relations", False, f"{kind} n={n}")
            if kind in ("uaTL1", "upTL1", "uaTL2", "upTL2"):
                E = alg.one()
                for j in range(0, n, 2):
                    E = E * alg.e(j)
                if kind == "uaTL1":
                    if not (E * alg.omega() * E - env.alpha * E).is_zero():
                        return ("quotient-relations", False, f"EOE {kind}")
                if kind == "upTL1":
                    F = alg.one()
                    for j in range(1, n, 2):
                        F = F * alg.e(j)
                    if not (E * F * E - env.alpha ** 2 * E).is_zero():
                        return ("quotient-relations", False, f"EFE {kind}")
                if kind in ("uaTL2", "upTL2") and not E.is_zero():
                    return ("quotient-relations", False, f"E=0 {kind}")
            if kind.startswith("up"):
                word = alg.e(0)
                reps = {"upTL": n - 2, "upTL1": (n - 2) // 2,
                        "upTL2": (n - 2) // 2}[kind]
                for _ in range(reps):
                    for j in range(n - 1, -1, -1):
                        word = word * alg.e(j)
                target = {"upTL": env.gamma ** 2, "upTL1": 1,
                          "upTL2": env.gamma}[kind]
                if not (word - target * alg.e(0)).is_zero():
                    return ("quotient-relations", False, f"unwind {kind} n={n}")
    return ("quotient-relations", True, f"all variants, n <= {max_n}")


def check_wenzl_jones(max_m: int, seed: int):
    env = sample_env(seed, "pTL", max_m)
    alg = Algebra(AlgebraVariant("pTL", max_m), env)
    for m in range(1, max_m + 1):
        p = wenzl_jones_P(m, alg)
        if not (p * p).equals(p):
            return ("wenzl-jones", False, f"P_{m}^2")
        for j in range(1, m):
            if not ((alg.e(j) * p).is_zero() and (p * alg.e(j)).is_zero()):
                return ("wenzl-jones", False, f"e_{j} P_{m}")
    return ("wenzl-jones", True, f"m <= {max_m}")


def check_gamma(max_n: int, seed: int):
    for kind in UNCOILED:
        for n in _legal_sizes(kind, max_n):
            v = AlgebraVariant(kind, n)
            env = sample_env(seed, kind, n)
            r = _sector(kind, env, n)
            ts = _maybe_corrupt(gamma_solve(v, n, r, env))
            tc = gamma_table_conjecture(v, n, r, env)
            if any(x for x in ts.diff(tc).values()):
                return ("gamma-equivalence", False, f"{kind} n={n}")
            if any(x for x in gamma_residuals(ts).values()):
                return ("gamma-residuals", False, f"{kind} n={n}")
    return ("gamma-solver-vs-conjecture", True,
            f"all variants, n <= {max_n}")


def check_projectors(max_n: int, seed: int):
    for kind in UNCOILED:
        for n in _legal_sizes(kind, min(max_n, 5)):
            v = AlgebraVariant(kind, n)
            env = sample_env(seed, kind, n)
            r = _sector(kind, env, n)
            alg = Algebra(v, env)
            q = build_projector_Q(v, n, r, "solver", env)
            if not (q * q).equals(q):
                return ("projectors", False, f"Q^2 {kind} n={n}")
            for j in range(n):
                ej = alg.e(j)
                if not ((ej * q).is_zero() and (q * ej).is_zero()):
                    return ("projectors", False, f"e_j Q {kind} n={n}")
            if kind.startswith("ua"):
                om = alg.omega()
                if not ((om * q - env.omega * q).is_zero()
                        and (q * om - env.omega * q).is_zero()):
                    return ("projectors", False, f"Omega Q {kind} n={n}")
            if not projector_oracle(v, n, r, env).equals(q):
                return ("projectors", False, f"oracle {kind} n={n}")
    return ("projectors", True, f"all variants, n <= {min(max_n, 5)}")


def check_e0Z_grids(max_n: int, seed: int):
    for kind in UNCOILED:
        for n in _legal_sizes(kind, max_n):
            v = AlgebraVariant(kind, n)
            env = sample_env(seed, kind, n)
            starred = kind in ("uaTL1", "upTL1")
            step = 1 if kind.startswith("ua") else 2
            for k in range(1, (n - 1) // 2 + 1):
                if starred and 2 * k >= n - 2:
                    continue
                for l2 in range(0, n - 2 * k, step):
                    if not check_e0Z(v, n, k, l2, env).is_zero():
                        return ("e0Z-expansion", False,
                                f"{kind} n={n} k={k} l2={l2}")
            if starred:
                rows = [(n // 2, 0)]
                if n >= 4:
                    rows.append(((n - 2) // 2, 0))
                    if kind.startswith("ua"):
                        rows.append(((n - 2) // 2, 1))
                for (k, l2) in rows:
                    if not check_e0Z(v, n, k, l2, env).is_zero():
                        return ("e0Z-expansion", False,
                                f"{kind} n={n} starred k={k}")
    return ("e0Z-expansion", True, f"all grids, n <= {max_n}")


def check_central(max_n: int, seed: int):
    for n in range(2, min(max_n, 4) + 1):
        env = sample_env(seed, "aTL", n)
        for d in range(n % 2, n + 1, 2):
            mod = StandardModule(n, d, env.z, env)
            for which in ("F", "Fbar", "OmegaN"):
                mat = central_matrix(n, which, mod)
                val = central_eigenvalue(which, mod)
                dim = len(mat)
                if not all(env.eq(mat[i][j], val if i == j else 0)
                           for i in range(dim) for j in range(dim)):
                    return ("central-elements", False, f"{which} n={n} d={d}")
    return ("central-elements", True, f"n <= {min(max_n, 4)}")


def run_selfcheck(max_n: int = 4, seed: int = 0):
    checks = [
        check_dimensions,
        check_relations,
        check_quotient_relations,
        lambda m, s: check_wenzl_jones(min(m + 2, 6), s),
        check_gamma,
        check_projectors,
        check_e0Z_grids,
        check_central,
    ]
    report = []
    for chk in checks:
        try:
            report.append(chk(max_n, seed))
        except Exception as exc:  # a crash is a failure, not an abort
            report.append((getattr(chk, "__name__", "check"), False,
                           f"exception: {exc}"))
    return report
