"""Exact scalar arithmetic over a sampled generic parameter point.

Every identity this package verifies is a polynomial identity in the
parameters (s, alpha, gamma, omega, z).  Instead of dragging symbolic
rational-function fields around, we evaluate at a seeded random rational
point and compute with exact ``Fraction`` arithmetic: a nonzero polynomial
vanishes there with probability zero, and resampling the seed would expose
such an accident.  The base parameter is s = q^(1/2), so that the
half-powers of q appearing in braid faces and eigenvalues stay rational.

A complex-float backend exists solely for the checks that genuinely need
all n-th roots of unity (splitting a periodic projector into its affine
sectors); its equality tolerance is 1e-9.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

EXACT = "exact-rational"
FLOAT = "complex-float"

FLOAT_RTOL = 1e-9

AFFINE_KINDS = ("uaTL", "uaTL1", "uaTL2")
PERIODIC_KINDS = ("upTL", "upTL1", "upTL2")
UNCOILED_KINDS = AFFINE_KINDS + PERIODIC_KINDS
STARRED_KINDS = ("uaTL1", "upTL1")  # non-contractible loops weigh alpha
ALL_KINDS = UNCOILED_KINDS + ("aTL", "pTL", "TL")


class NonGenericParameterError(ValueError):
    """A guarded denominator vanished: the parameter point is not generic."""


@dataclass(frozen=True)
class ParamEnv:
    """A concrete parameter point.  beta is always derived, never stored."""

    backend: str
    s: object  # Fraction or complex; q = s**2
    alpha: object
    gamma: object
    omega: object  # None unless the variant is affine uncoiled
    z: object
    rng_seed: int

    def __post_init__(self):
        if self.backend not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == EXACT and self.s in (0, 1, -1):
            raise NonGenericParameterError("s must avoid {0, 1, -1}")

    @property
    def q(self):
        return self.s * self.s

    @property
    def beta(self):
        return -self.q - 1 / self.q

    def eq(self, a, b) -> bool:
        """Backend-aware scalar equality (exact, or 1e-9 relative)."""
        if self.backend == EXACT:
            return a == b
        scale = max(1.0, abs(a), abs(b))
        return abs(a - b) <= FLOAT_RTOL * scale

    def is_zero(self, a) -> bool:
        return self.eq(a, 0)

    def to_float(self) -> "ParamEnv":
        conv = lambda x: None if x is None else complex(x)
        return ParamEnv(FLOAT, conv(self.s), conv(self.alpha), conv(self.gamma),
                        conv(self.omega), conv(self.z), self.rng_seed)

    def with_omega(self, omega, n: int) -> "ParamEnv":
        """Replace the affine root; gamma = omega^n is re-derived."""
        return replace(self, omega=omega, gamma=omega ** n)

    def with_z(self, z) -> "ParamEnv":
        return replace(self, z=z)

    def to_json(self) -> dict:
        return {
            "backend": self.backend,
            "s": scalar_to_json(self.s),
            "alpha": scalar_to_json(self.alpha),
            "gamma": scalar_to_json(self.gamma),
            "omega": None if self.omega is None else scalar_to_json(self.omega),
            "z": scalar_to_json(self.z),
            "rng_seed": self.rng_seed,
        }


def qnum_at(q, k: int):
    """The quantum integer [k] at a given q; at q = 1 the classical limit k."""
    if q == 1:
        return Fraction(k) if isinstance(q, Fraction) else k
    return (q ** k - q ** (-k)) / (q - 1 / q)


@lru_cache(maxsize=None)
def _qnum_cached(s, k):
    return qnum_at(s * s, k)


def qnum(k: int, env: ParamEnv):
    """[k] = (q^k - q^-k)/(q - q^-1); satisfies [-k] = -[k], [0] = 0."""
    return _qnum_cached(env.s, k)


def qfact(k: int, env: ParamEnv):
    """[k]! = [1][2]...[k]."""
    if k < 0:
        raise ValueError("q-factorial of a negative integer")
    out = qnum(1, env) if k else Fraction(1)
    for j in range(2, k + 1):
        out = out * qnum(j, env)
    return out


def qbinom(kappa: int, tau: int, env: ParamEnv):
    """q-binomial [kappa]!/([tau]![kappa-tau]!), for 0 <= tau <= kappa."""
    if not 0 <= tau <= kappa:
        raise ValueError(f"qbinom indices out of range: ({kappa}, {tau})")
    return qfact(kappa, env) / (qfact(tau, env) * qfact(kappa - tau, env))


def gamma_hat(kind: str, env: ParamEnv):
    """The unwinding twist used by the window conventions: gamma, or 1 for
    the starred kinds (whose full turn is weight one)."""
    if kind in STARRED_KINDS:
        return Fraction(1) if env.backend == EXACT else complex(1)
    return env.gamma


def _kind_of(variant) -> str:
    return variant if isinstance(variant, str) else variant.kind


def guard_values(kind: str, n: int, env: ParamEnv):
    """All denominators the projector machinery divides by, evaluated at env.

    These are the guards listed with the projector design decisions: the
    q-numbers up to [2n], the kernel denominators gamma-hat^(+-1) q^(+-n m_k) - 1
    (squared versions for n odd), the starred combinations alpha[n/2] -+ [n],
    and the affine conjecture denominators omega^2 q^(+-2 m_k) - 1.
    """
    q = env.q
    vals = [env.s, env.s - 1, env.s + 1]
    for j in range(1, 2 * n + 1):
        vals.append(qnum(j, env))
    if kind not in UNCOILED_KINDS:
        return vals
    gh = gamma_hat(kind, env)
    for k in range(1, (n - 1) // 2 + 1):
        mk2 = n - 2 * k  # = 2 m_k
        if n % 2 == 0:
            e = n * mk2 // 2  # n * m_k
            vals += [gh - q ** e, gh - q ** (-e)]
        else:
            e = n * mk2  # 2 n m_k
            g2 = gh * gh
            vals += [g2 - q ** e, g2 - q ** (-e)]
        if kind in AFFINE_KINDS:
            w2 = env.omega * env.omega
            vals += [w2 * q ** mk2 - 1, w2 * q ** (-mk2) - 1]
    if kind in STARRED_KINDS:
        half = qnum(n // 2, env)
        full = qnum(n, env)
        vals += [env.alpha * half - full, env.alpha * half + full,
                 env.alpha ** 2 * half ** 2 - full ** 2]
    vals += [env.z, env.z - 1, env.z + 1]
    return vals


def validate_env(env: ParamEnv, variant, n: int | None = None) -> None:
    """Raise NonGenericParameterError if any guarded denominator vanishes."""
    kind = _kind_of(variant)
    if n is None:
        n = variant.n
    if kind in AFFINE_KINDS:
        if env.omega is None:
            raise NonGenericParameterError("affine variant needs omega")
        if not env.eq(env.gamma, env.omega ** n):
            raise NonGenericParameterError("gamma != omega^n")
    for v in guard_values(kind, n, env):
        if env.is_zero(v):
            raise NonGenericParameterError(
                f"guarded denominator vanishes for {kind}, n={n}")


def sample_env(seed: int, variant, n: int | None = None) -> ParamEnv:
    """Deterministic seeded choice of small generic rationals for a variant.

    Resamples (up to 1000 times) until every guarded denominator for the
    given variant and size is nonzero.
    """
    kind = _kind_of(variant)
    if n is None:
        n = variant.n
    if n < 1:
        raise ValueError("n >= 1 required")
    rng = random.Random(seed)

    def frac(lo=1, hi=9, exclude=()):
        for _ in range(100):
            x = Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
            if x not in exclude:
                return x
        raise NonGenericParameterError("could not sample a parameter")

    for _ in range(1000):
        s = frac(2, 9, exclude=(1,))
        alpha = frac(1, 9)
        z = frac(2, 9, exclude=(1,))
        omega = None
        if kind == "uaTL1":
            omega = Fraction(rng.choice((1, -1)))  # omega^n = 1 over Q
            gamma = omega ** n
        elif kind in AFFINE_KINDS:
            omega = frac(2, 7, exclude=(1,))
            gamma = omega ** n
        elif kind == "upTL1":
            gamma = Fraction(1)
        else:
            gamma = frac(2, 7, exclude=(1,))
        env = ParamEnv(EXACT, s, alpha, gamma, omega, z, seed)
        try:
            validate_env(env, kind, n)
        except NonGenericParameterError:
            continue
        return env
    raise NonGenericParameterError(
        f"non-generic parameter space: 1000 resamples failed for {kind}, n={n}")


# -- serialization ----------------------------------------------------------

def scalar_to_json(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return {"re": x, "im": 0.0}
    raise TypeError(f"cannot serialize scalar {x!r}")


def scalar_from_json(obj):
    if isinstance(obj, str):
        if "/" in obj:
            num, den = obj.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(obj))
    if isinstance(obj, dict):
        return complex(obj["re"], obj["im"])
    raise TypeError(f"cannot parse scalar {obj!r}")
