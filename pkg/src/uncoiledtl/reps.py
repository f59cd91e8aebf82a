"""Standard modules W_{n,d,z}, the twisted diagram action, and the central
elements F, F-bar, G, H_k with their predicted eigenvalues."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import diagrams
from .algebra import Algebra, AlgebraElement, AlgebraVariant, ResourceLimitError
from .diagrams import Diagram, LinkState, act_on_state, link_states
from .scalars import EXACT, ParamEnv

MAX_BRAID_N = 8
MAX_CHEBYSHEV_DEGREE = 24


@dataclass(frozen=True)
class StandardModule:
    """W_{n,d,z}: link states with d defects; twist z (loop weight
    alpha = z + 1/z when d = 0)."""

    n: int
    d: int
    z: object
    env: ParamEnv

    def __post_init__(self):
        if (self.n - self.d) % 2 or not 0 <= self.d <= self.n:
            raise ValueError("d must match the parity of n")
        if not self.z:
            raise ValueError("z must be invertible")

    @property
    def basis(self):
        return link_states(self.n, self.d)

    @property
    def alpha(self):
        return self.z + 1 / self.z

    def index(self, state: LinkState) -> int:
        return self.basis.index(state)

    def vector(self, state: LinkState) -> "ModuleVector":
        return ModuleVector(self, {state: Fraction(1) if
                                   self.env.backend == EXACT else complex(1)})

    def to_json(self):
        from .scalars import scalar_to_json
        return {"n": self.n, "d": self.d, "z": scalar_to_json(self.z)}


@dataclass
class ModuleVector:
    module: StandardModule
    coeffs: dict

    def __add__(self, other):
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            val = out.get(s, 0) + c
            if val:
                out[s] = val
            elif s in out:
                del out[s]
        return ModuleVector(self.module, out)

    def scaled(self, x):
        if not x:
            return ModuleVector(self.module, {})
        return ModuleVector(self.module,
                            {s: c * x for s, c in self.coeffs.items()})

    __rmul__ = scaled

    def __sub__(self, other):
        return self + other.scaled(-1)

    def is_zero(self) -> bool:
        env = self.module.env
        return all(env.is_zero(c) for c in self.coeffs.values())


def act_diagram(c: Diagram, w: LinkState, module: StandardModule):
    """c . w with the twist bookkeeping; None when two defects join."""
    res = act_on_state(c, w)
    if res is None:
        return None
    beta_exp, nc, z_exp, state = res
    if c.d == 0:
        nc += c.mid  # loops already stored on the diagram weigh alpha too
    env = module.env
    if nc and module.d > 0:
        raise AssertionError("non-contractible loop in a d > 0 action")
    coeff = Fraction(1) if env.backend == EXACT else complex(1)
    if beta_exp:
        coeff = coeff * env.beta ** beta_exp
    if nc:
        coeff = coeff * module.alpha ** nc
    if z_exp:
        coeff = coeff * module.z ** z_exp
    return coeff, state


def act(a, v: ModuleVector) -> ModuleVector:
    """Action of a diagram or an algebra element on a module vector."""
    module = v.module
    terms = a.terms if isinstance(a, AlgebraElement) else {a: 1}
    out = {}
    for dia, ca in terms.items():
        if dia.n != module.n:
            raise ValueError("size mismatch")
        for state, cv in v.coeffs.items():
            res = act_diagram(dia, state, module)
            if res is None:
                continue
            coeff, new_state = res
            val = out.get(new_state, 0) + ca * cv * coeff
            if val:
                out[new_state] = val
            elif new_state in out:
                del out[new_state]
    return ModuleVector(module, out)


def matrix_of(a, module: StandardModule):
    """Row-major matrix of the action on the ordered basis of B_{n,d}."""
    basis = module.basis
    dim = len(basis)
    zero = Fraction(0) if module.env.backend == EXACT else complex(0)
    index = {s: i for i, s in enumerate(basis)}
    cols = []
    for state in basis:
        image = act(a, module.vector(state))
        col = [zero] * dim
        for s, c in image.coeffs.items():
            col[index[s]] = c
        cols.append(col)
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]


def matrix_to_json(m):
    from .scalars import scalar_to_json
    return [[scalar_to_json(x) for x in row] for row in m]


# -- central elements ---------------------------------------------------------

def braid_transfer(n: int, env: ParamEnv, bar: bool = False) -> AlgebraElement:
    """F (or F-bar): the row of n crossing faces expanded into 2^n diagram
    terms, each face contributing q^(1/2) on the Omega-type resolution and
    q^(-1/2) on the other (roles swapped for F-bar)."""
    if n > MAX_BRAID_N:
        raise ResourceLimitError(f"braid transfer limited to n <= {MAX_BRAID_N}")
    alg = Algebra(AlgebraVariant("aTL", n), env)
    s = env.s
    acc = {}
    for choice in itertools.product((True, False), repeat=n):
        # m_i joins face i (its east side) to face i+1 (west side); True = the
        # resolution composing to Omega: south-east plus west-north.
        pairs = {}
        for i in range(n):
            a_i = choice[i]
            a_j = choice[(i + 1) % n]
            src = ("B", i) if a_i else ("T", i)
            dst = ("T", i + 1) if a_j else ("B", i + 1)
            pairs[src] = dst
        dia = _diagram_from_pairs(n, pairs)
        w = sum(1 if c else -1 for c in choice)
        coeff = s ** (-w if bar else w)
        acc[dia] = acc.get(dia, 0) + coeff
    return alg.element(acc)


def _diagram_from_pairs(n: int, pairs: dict) -> Diagram:
    """Assemble a diagram from one-directional cover pairs on its ports."""
    bot = {}
    top = {}
    through = {}
    for (s1, p1), (s2, p2) in pairs.items():
        if s1 == s2 == "B":
            bot[p1 % n] = p2 + (p1 % n - p1)
            bot[p2 % n] = p1 + (p2 % n - p2)
        elif s1 == s2 == "T":
            top[p1 % n] = p2 + (p1 % n - p1)
            top[p2 % n] = p1 + (p2 % n - p2)
        elif s1 == "B":
            through[p1 % n] = p2 + (p1 % n - p1)
        else:
            through[p2 % n] = p1 + (p2 % n - p2)

    def state(pairmap):
        nodes = [diagrams.DEFECT] * n
        for i in range(n):
            if i in pairmap:
                x = pairmap[i]
                nodes[i] = (x % n, x % n != x)
        return LinkState(nodes, validate=False)

    bottom = state(bot)
    topst = state(top)
    d = len(through)
    if d == 0:
        return Diagram(bottom, topst, 0)
    ti = {p: a for a, p in enumerate(topst.defects)}
    mid = None
    for a, p in enumerate(bottom.defects):
        x = through[p]
        r = ti[x % n] + d * (x // n) - a
        if mid is None:
            mid = r
        else:
            assert mid == r
    return Diagram(bottom, topst, mid)


def chebyshev_like(f: AlgebraElement, m: int) -> AlgebraElement:
    """2 T_m(F/2) through the renormalized recurrence U_m = F U_{m-1} - U_{m-2},
    avoiding rational halves."""
    alg = f.algebra
    two = 2 * alg.one()
    if m == 0:
        return two
    prev, cur = two, f
    for _ in range(2, m + 1):
        prev, cur = cur, f * cur - prev
    return cur


def build_central(n: int, which: str, env: ParamEnv, k=None) -> AlgebraElement:
    """F, Fbar, G, Omega^(+-n), or H(k), as elements of aTL."""
    alg = Algebra(AlgebraVariant("aTL", n), env)
    q = env.q
    if which == "F":
        return braid_transfer(n, env)
    if which == "Fbar":
        return braid_transfer(n, env, bar=True)
    if which == "OmegaN":
        return alg.omega(n)
    if which == "OmegaNinv":
        return alg.omega(-n)
    if which == "G":
        f = braid_transfer(n, env)
        fb = braid_transfer(n, env, bar=True)
        return f * f + fb * fb - (q ** n + q ** (-n)) * (f * fb)
    if which == "H":
        k = Fraction(k)
        if n % 2 and k.denominator != 1:
            raise ValueError("H(k) needs integer k for n odd")
        if k.denominator not in (1, 2):
            raise ValueError("H(k) needs k in (1/2) N")
        m = 2 * n * k
        if m.denominator != 1:
            raise ValueError("2nk must be an integer")
        m = int(m)
        if m > MAX_CHEBYSHEV_DEGREE:
            raise ResourceLimitError(
                f"H(k) limited to 2nk <= {MAX_CHEBYSHEV_DEGREE}")
        n2k = int(n * n * k)
        f = braid_transfer(n, env)
        u = chebyshev_like(f, m)
        return u - (q ** n2k) * alg.omega(m) - (q ** (-n2k)) * alg.omega(-m)
    raise ValueError(f"unknown central element {which!r}")


def central_eigenvalue(which: str, module: StandardModule, k=None):
    """The predicted scalar of a central element on W_{n,d,z}."""
    env = module.env
    n, d, z = module.n, module.d, module.z
    q = env.q
    sd = env.s ** d  # q^(d/2)
    if which == "F":
        return z * sd + 1 / (z * sd)
    if which == "Fbar":
        return z / sd + sd / z
    if which == "OmegaN":
        return z ** d
    if which == "OmegaNinv":
        return z ** (-d)
    if which == "G":
        f = z * sd + 1 / (z * sd)
        fb = z / sd + sd / z
        return f * f + fb * fb - (q ** n + q ** (-n)) * f * fb
    if which == "H":
        k = Fraction(k)
        e1 = int(2 * n * k)
        e2 = int(n * k * d)
        e3 = int(n * n * k)
        e4 = int(2 * d * k)
        return (z ** e1 * q ** e2 + z ** (-e1) * q ** (-e2)
                - q ** e3 * z ** e4 - q ** (-e3) * z ** (-e4))
    raise ValueError(f"unknown central element {which!r}")


def central_matrix(n: int, which: str, module: StandardModule, k=None):
    """The matrix of a central element on a standard module.

    For H(k) the Chebyshev recurrence runs directly on matrix_of(F): the
    action map is linear and multiplicative (the representation property,
    itself part of the verification suite), so this equals the matrix of
    the element-level recurrence while staying tractable at 2nk = 24.
    """
    env = module.env
    if which != "H":
        return matrix_of(build_central(n, which, env), module)
    k = Fraction(k)
    m = 2 * n * k
    if m.denominator != 1:
        raise ValueError("2nk must be an integer")
    m = int(m)
    if m > MAX_CHEBYSHEV_DEGREE:
        raise ResourceLimitError(
            f"H(k) limited to 2nk <= {MAX_CHEBYSHEV_DEGREE}")
    fmat = matrix_of(braid_transfer(n, env), module)
    dim = len(fmat)
    two_id = [[(2 if i == j else 0) for j in range(dim)] for i in range(dim)]

    def matmul(a, b):
        return [[sum(a[i][t] * b[t][j] for t in range(dim))
                 for j in range(dim)] for i in range(dim)]

    def matsub(a, b):
        return [[a[i][j] - b[i][j] for j in range(dim)] for i in range(dim)]

    prev, cur = two_id, fmat
    for _ in range(2, m + 1):
        prev, cur = cur, matsub(matmul(fmat, cur), prev)
    if m == 0:
        cur = two_id
    n2k = int(n * n * k)
    q = env.q
    omat = matrix_of(Algebra(AlgebraVariant("aTL", n), env).omega(m), module)
    oinv = matrix_of(Algebra(AlgebraVariant("aTL", n), env).omega(-m), module)
    out = [[cur[i][j] - q ** n2k * omat[i][j] - q ** (-n2k) * oinv[i][j]
            for j in range(dim)] for i in range(dim)]
    return out


def is_scalar_action(a, module: StandardModule, value) -> bool:
    """matrix_of(a) == value * identity, with backend-aware equality."""
    m = matrix_of(a, module)
    env = module.env
    for i, row in enumerate(m):
        for j, x in enumerate(row):
            want = value if i == j else 0
            if not env.eq(x, want):
                return False
    return True
