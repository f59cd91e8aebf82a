"""Variant-aware linear algebra of diagrams.

The eight variants: the infinite aTL and pTL (no reduction, raw words), the
finite TL subalgebra, and the six uncoiled quotients.  Reduction is eager:
every product term is immediately folded into its variant's canonical mid
window, which keeps winding exponents bounded and term keys hashable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import diagrams
from .diagrams import Diagram, LinkState, link_states, multiply_raw, sigma_bt
from .scalars import (AFFINE_KINDS, ALL_KINDS, EXACT, FLOAT_RTOL,
                      PERIODIC_KINDS, UNCOILED_KINDS, ParamEnv, gamma_hat)

DEFAULT_MAX_TERMS = 5_000_000


class ResourceLimitError(RuntimeError):
    """An element grew past UTL_MAX_TERMS."""


class InfiniteAlgebraError(ValueError):
    """Basis/dimension requested for an infinite-dimensional variant."""


def _max_terms() -> int:
    return int(os.environ.get("UTL_MAX_TERMS", DEFAULT_MAX_TERMS))


@dataclass(frozen=True)
class AlgebraVariant:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n >= 1 required")
        if self.kind in ("uaTL", "upTL") and self.n % 2 == 0:
            raise ValueError(f"{self.kind} requires n odd")
        if self.kind in ("uaTL1", "upTL1", "uaTL2", "upTL2") and self.n % 2:
            raise ValueError(f"{self.kind} requires n even")

    @property
    def is_uncoiled(self) -> bool:
        return self.kind in UNCOILED_KINDS

    @property
    def is_affine(self) -> bool:
        return self.kind in AFFINE_KINDS or self.kind == "aTL"

    @property
    def even_only(self) -> bool:
        """pTL-derived variants contain only even diagrams."""
        return self.kind in ("pTL", "TL") + PERIODIC_KINDS

    def defect_sectors(self):
        """The through-line counts d carried by this variant's basis."""
        n = self.n
        if self.kind in ("uaTL", "upTL"):
            return tuple(range(n, 0, -2))
        if self.kind in ("uaTL1", "upTL1"):
            return tuple(range(n, -1, -2))
        if self.kind in ("uaTL2", "upTL2"):
            return tuple(range(n, 1, -2))
        if self.kind == "TL":
            return tuple(range(n, -1, -2))
        raise InfiniteAlgebraError(f"{self.kind} has unbounded sectors")


def _reduce_mid(kind: str, env: ParamEnv, d: int, mid: int):
    """Fold a middle exponent into its variant window.

    Returns (scalar factor, folded mid).  Windows: uaTL-family [0, d) with a
    factor gamma-hat per full turn; upTL [0, 2d) with gamma^2 per double
    turn; upTL1/upTL2 [0, d) with gamma-hat per turn (parity is preserved
    because d is even there).
    """
    one = Fraction(1) if env.backend == EXACT else complex(1)
    if kind in ("aTL", "pTL", "TL") or d == 0:
        return one, mid
    if kind in ("uaTL", "uaTL1", "uaTL2", "upTL1", "upTL2"):
        window = d
        per_wrap = gamma_hat(kind, env)
    elif kind == "upTL":
        window = 2 * d
        per_wrap = env.gamma * env.gamma
    else:
        raise ValueError(kind)
    w, m = divmod(mid, window)
    return per_wrap ** w if w else one, m


def reduce(c: Diagram, variant: AlgebraVariant, env: ParamEnv):
    """Variant reduction to the canonical-window representative.

    Returns (scalar, Diagram) or (0, None) when the diagram dies in the
    quotient (d = 0 in the double-starred kinds).
    """
    if c.n != variant.n:
        raise ValueError("diagram size does not match the variant")
    kind = variant.kind
    if kind == "TL":
        if (c.bottom.crossing_count() or c.top.crossing_count() or c.mid):
            raise ValueError("seam-crossing diagram handed to TL")
        return Fraction(1) if env.backend == EXACT else complex(1), c
    if kind in ("aTL", "pTL"):
        if variant.even_only and not c.is_even():
            raise ValueError(f"odd diagram handed to {kind}")
        return Fraction(1) if env.backend == EXACT else complex(1), c
    if variant.even_only and not c.is_even():
        raise ValueError(f"odd diagram handed to {kind}")
    one = Fraction(1) if env.backend == EXACT else complex(1)
    d = c.d
    if d == 0:
        m = c.mid
        if kind in ("uaTL2", "upTL2"):
            return 0, None
        if kind == "uaTL1":
            coeff = env.alpha ** m if m else one
            if m == 0:
                return coeff, c
            return coeff, Diagram(c.bottom, c.top, 0)
        if kind == "upTL1":
            pairs, rem = divmod(m, 2)
            coeff = env.alpha ** (2 * pairs) if pairs else one
            if rem == m:
                return coeff, c
            return coeff, Diagram(c.bottom, c.top, rem)
        raise ValueError(f"{kind} has no d = 0 sector")  # n odd kinds
    if d == variant.n and kind in PERIODIC_KINDS:
        if c.mid != 0:
            raise ValueError(
                "a nonzero winding on n through-lines is not an element of "
                "the periodic algebra")
        return one, c
    coeff, m = _reduce_mid(kind, env, d, c.mid)
    if m == c.mid:
        return coeff, c
    return coeff, diagrams.intern_diagram(c.bottom, c.top, m)


class Algebra:
    """A variant together with a parameter point; element factory."""

    def __init__(self, variant: AlgebraVariant, env: ParamEnv):
        self.variant = variant
        self.env = env
        self._one = Fraction(1) if env.backend == EXACT else complex(1)
        self._reduce_memo: dict = {}

    @property
    def n(self) -> int:
        return self.variant.n

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def element(self, terms) -> "AlgebraElement":
        out = {}
        for dia, coeff in dict(terms).items():
            s, dr = reduce(dia, self.variant, self.env)
            if dr is None:
                continue
            val = out.get(dr, 0) + coeff * s
            if val:
                out[dr] = val
            elif dr in out:
                del out[dr]
        return AlgebraElement(self, out)

    def from_diagram(self, dia: Diagram, coeff=None) -> "AlgebraElement":
        return self.element({dia: self._one if coeff is None else coeff})

    def one(self) -> "AlgebraElement":
        return self.from_diagram(diagrams.identity(self.n))

    def e(self, j: int) -> "AlgebraElement":
        return self.from_diagram(diagrams.e(self.n, j))

    def omega(self, power: int = 1) -> "AlgebraElement":
        return self.from_diagram(diagrams.omega(self.n, power))

    def word(self, *js) -> "AlgebraElement":
        """The product e_{j1} e_{j2} ... read left to right."""
        out = self.one()
        for j in js:
            out = out * self.e(j)
        return out


class AlgebraElement:
    """A finite scalar-weighted combination of reduced canonical diagrams."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: Algebra, terms: dict):
        self.algebra = algebra
        self.terms = terms

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            val = out.get(d, 0) + c
            if val:
                out[d] = val
            elif d in out:
                del out[d]
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def scaled(self, scalar):
        if not scalar:
            return AlgebraElement(self.algebra, {})
        return AlgebraElement(self.algebra,
                              {d: c * scalar for d, c in self.terms.items()})

    def __rmul__(self, scalar):
        return self.scaled(scalar)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scaled(other)

    def _check(self, other):
        if self.algebra.variant != other.algebra.variant:
            raise ValueError("variant mismatch")

    def coefficient(self, dia: Diagram):
        return self.terms.get(dia, 0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self) -> bool:
        env = self.algebra.env
        if env.backend == EXACT:
            return not self.terms
        return all(env.is_zero(c) for c in self.terms.values())

    def equals(self, other) -> bool:
        self._check(other)
        env = self.algebra.env
        if env.backend == EXACT:
            return self.terms == other.terms
        scale = max(1.0, self.max_abs(), other.max_abs())
        diff = self - other
        return all(abs(c) <= FLOAT_RTOL * scale for c in diff.terms.values())

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.equals(other)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        parts = [f"{c}*{d!r}" for d, c in self.sorted_terms()[:4]]
        more = "" if len(self.terms) <= 4 else f" ... ({len(self.terms)} terms)"
        return f"<{self.algebra.variant.kind} element: {' + '.join(parts)}{more}>"

    def to_json(self):
        from .scalars import scalar_to_json
        return {
            "variant": self.algebra.variant.kind,
            "n": self.algebra.n,
            "terms": [{"diagram": d.to_json(), "coeff": scalar_to_json(c)}
                      for d, c in self.sorted_terms()],
        }


@lru_cache(maxsize=None)
def _beta_powers(s, backend):
    # tiny helper cache: beta^k grows only to modest exponents
    return {}


def scaled_to_integers(a: AlgebraElement):
    """(scale * a, scale) with integer coefficients, for cheap idempotency
    checks: a*a == a is equivalent to x*x == scale*x for x = scale*a, and
    plain int arithmetic skips the gcd normalization of Fraction."""
    scale = 1
    for c in a.terms.values():
        if not isinstance(c, Fraction):
            return a, Fraction(1)
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    terms = {d: int(c * scale) for d, c in a.terms.items()}
    return AlgebraElement(a.algebra, terms), Fraction(scale)


def is_idempotent(a: AlgebraElement) -> bool:
    """a*a == a, computed over integer coefficients when possible."""
    if a.algebra.env.backend != EXACT:
        return (a * a).equals(a)
    x, scale = scaled_to_integers(a)
    lhs = x * x
    rhs = x.scaled(int(scale)) if scale.denominator == 1 else scale * x
    return lhs.terms == rhs.terms


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the diagram product, with eager reduction."""
    a._check(b)
    alg = a.algebra
    variant, env = alg.variant, alg.env
    beta = env.beta
    bcache = _beta_powers(env.s, env.backend)
    rmemo = alg._reduce_memo
    cap = _max_terms()
    out = {}
    out_get = out.get
    for d1, c1 in a.terms.items():
        for d2, c2 in b.terms.items():
            dia, be, _nc = multiply_raw(d1, d2)
            hit = rmemo.get(dia)
            if hit is None:
                hit = rmemo[dia] = reduce(dia, variant, env)
            s, dr = hit
            if dr is None:
                continue
            coeff = c1 * c2
            if s != 1:
                coeff = coeff * s
            if be:
                bp = bcache.get(be)
                if bp is None:
                    bp = bcache[be] = beta ** be
                coeff = coeff * bp
            val = out_get(dr, 0) + coeff
            if val:
                out[dr] = val
            elif dr in out:
                del out[dr]
        if len(out) > cap:
            raise ResourceLimitError(f"element exceeded UTL_MAX_TERMS={cap}")
    return AlgebraElement(alg, out)


# -- bases and dimensions -----------------------------------------------------

def _middle_exponents(variant: AlgebraVariant, d: int, b: LinkState,
                      t: LinkState):
    kind, n = variant.kind, variant.n
    if d == 0:
        if kind == "uaTL1":
            return (0,)
        if kind == "upTL1":
            return (sigma_bt(b, t),)
        if kind == "TL":
            return (0,)
        raise AssertionError("d = 0 reached for a kind without that sector")
    if kind == "TL":
        return (0,)
    if d == n and kind in PERIODIC_KINDS:
        return (0,)
    if kind in AFFINE_KINDS:
        return tuple(range(d))
    s = sigma_bt(b, t)
    if kind == "upTL":
        return tuple(s + 2 * r for r in range(d))
    return tuple(s + 2 * r for r in range(d // 2))  # upTL1, upTL2


def basis_enumerate(variant: AlgebraVariant):
    """The sandwich basis S_d(...) of an uncoiled variant (or of TL),
    ordered by d descending, then bottom, top, mid."""
    if variant.kind in ("aTL", "pTL"):
        raise InfiniteAlgebraError(f"{variant.kind} is infinite-dimensional")
    n = variant.n
    out = []
    for d in variant.defect_sectors():
        states = link_states(n, d)
        if variant.kind == "TL":
            states = tuple(v for v in states if v.crossing_count() == 0)
        for b in states:
            for t in states:
                for m in _middle_exponents(variant, d, b, t):
                    out.append(Diagram(b, t, m))
    out.sort(key=Diagram.sort_key)
    return tuple(out)


def dimension_closed_form(variant: AlgebraVariant) -> int:
    """The closed forms of the dimension corollaries."""
    n, kind = variant.n, variant.kind
    c = math.comb
    if kind == "TL":
        return c(2 * n, n) // (n + 1)
    if kind == "uaTL":
        return n * c(n - 1, (n - 1) // 2) ** 2
    if kind == "upTL":
        return n * c(n - 1, (n - 1) // 2) ** 2 - (n - 1)
    if kind == "uaTL1":
        return (n + 4) * c(n - 1, n // 2) ** 2
    if kind == "upTL1":
        return (n // 2 + 4) * c(n - 1, n // 2) ** 2 - (n // 2 - 1)
    if kind == "uaTL2":
        return n * c(n - 1, n // 2) ** 2
    if kind == "upTL2":
        return (n // 2) * c(n - 1, n // 2) ** 2 - (n // 2 - 1)
    raise InfiniteAlgebraError(f"{kind} is infinite-dimensional")


# -- the sandwich bilinear form ----------------------------------------------

@dataclass(frozen=True)
class MiddleValue:
    """A scalar multiple of Omega_d^power (d > 0) or f^power (d = 0)."""

    coeff: object
    power: int
    d: int

    def is_zero(self) -> bool:
        return not self.coeff


def psi_bilinear(v: LinkState, w: LinkState, variant: AlgebraVariant,
                 env: ParamEnv) -> MiddleValue:
    """The form psi_d(v, w): v upright above the flipped w, read off the
    middle-algebra value, reduced per variant.

    Windings count descents from v's defects, leftward positive, matching
    the Omega convention; inside a sandwich product the inserted middle is
    therefore psi_d(upper bottom-state, lower top-state)."""
    if v.n != w.n:
        raise ValueError("size mismatch")
    if v.d != w.d:
        raise ValueError("defect-count mismatch")
    n, d = v.n, v.d
    lower, upper = v.cover, w.cover
    beta_exp = 0
    nc = 0
    used = set()
    pair = {}  # v-defect position -> w-defect cover position

    def step(cover, pos):
        base = pos % n
        part = cover[base]
        if part is None:
            return None, base
        return part + (pos - base), None

    for p in v.defects:
        used.add(p)
        pos, layer = p, 1  # 1 = continue through w, 0 = through v
        while True:
            cov = upper if layer == 1 else lower
            nxt, _ = step(cov, pos)
            if nxt is None:
                if layer == 0:
                    return MiddleValue(0, 0, d)  # two v-defects joined
                pair[p] = pos  # cover position of the w-defect reached
                break
            used.add(nxt % n)
            pos, layer = nxt, 1 - layer
        used.add(pos % n)

    for start in range(n):
        if start in used:
            continue
        used.add(start)
        pos, layer = start, 1
        while True:
            cov = upper if layer == 1 else lower
            nxt, _ = step(cov, pos)
            if nxt is None:
                raise AssertionError("loop trace hit a defect")
            used.add(nxt % n)
            if nxt % n == start:
                delta = nxt - start
                break
            pos, layer = nxt, 1 - layer
        if delta == 0:
            beta_exp += 1
        else:
            nc += 1

    coeff = env.beta ** beta_exp if beta_exp else (
        Fraction(1) if env.backend == EXACT else complex(1))
    kind = variant.kind
    if d == 0:
        m = nc
        if kind in ("uaTL2", "upTL2"):
            return MiddleValue(0, 0, 0)
        if kind == "uaTL1":
            return MiddleValue(coeff * env.alpha ** m if m else coeff, 0, 0)
        if kind == "upTL1":
            pairs, rem = divmod(m, 2)
            c = coeff * env.alpha ** (2 * pairs) if pairs else coeff
            return MiddleValue(c, rem, 0)
        return MiddleValue(coeff, m, 0)  # aTL/pTL: raw f-power
    # winding: the diagram iota(w) v has w below and v on top, so a defect
    # descending from v-index a lands on w-index a - r; a leftward descent
    # counts +1, matching the Omega convention of the diagram mid.
    wi = {p: a for a, p in enumerate(w.defects)}
    r = None
    for a, p in enumerate(v.defects):
        x = pair[p]
        idx = wi[x % n] + d * (x // n)
        if r is None:
            r = a - idx
        elif r != a - idx:
            raise AssertionError("defects with unequal winding")
    factor, m = _reduce_mid(kind, env, d, r)
    return MiddleValue(coeff * factor, m, d)
