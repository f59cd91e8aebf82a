import random
from fractions import Fraction

import pytest

from uncoiledtl.algebra import (Algebra, AlgebraElement, AlgebraVariant,
                                InfiniteAlgebraError, ResourceLimitError,
                                basis_enumerate, dimension_closed_form,
                                psi_bilinear, reduce)
from uncoiledtl.diagrams import (DEFECT, Diagram, LinkState, e, identity,
                                 link_states, omega)
from uncoiledtl.scalars import sample_env

D = DEFECT


def st(*nodes):
    return LinkState(nodes)


# -- reduce -------------------------------------------------------------------

def test_reduce_uatl_full_unwinding():
    env = sample_env(2, "uaTL", 5)
    v = AlgebraVariant("uaTL", 5)
    s, dia = reduce(omega(5, 5), v, env)
    assert s == env.gamma and dia == identity(5)
    s, dia = reduce(omega(5, -3), v, env)
    assert s == 1 / env.gamma and dia == omega(5, 2)


def test_reduce_uptl1_loop_pairs():
    env = sample_env(2, "upTL1", 4)
    v = AlgebraVariant("upTL1", 4)
    a = st((3, True), (2, False), (1, False), (0, True))
    c = Diagram(a, a, 2)  # two non-contractible loops
    s, dia = reduce(c, v, env)
    assert s == env.alpha ** 2 and dia == Diagram(a, a, 0)
    b = st((1, False), (0, False), (3, False), (2, False))
    c = Diagram(a, b, 3)  # odd loop count needs sigma_bt = 1
    s, dia = reduce(c, v, env)
    assert s == env.alpha ** 2 and dia == Diagram(a, b, 1)


def test_reduce_uatl2_kills_d0():
    env = sample_env(2, "uaTL2", 4)
    v = AlgebraVariant("uaTL2", 4)
    a = st((3, True), (2, False), (1, False), (0, True))
    s, dia = reduce(Diagram(a, a, 0), v, env)
    assert s == 0 and dia is None


def test_reduce_idempotent_on_bases():
    for kind in ("uaTL", "upTL", "uaTL1", "upTL1", "uaTL2", "upTL2"):
        for n in range(3 if kind in ("uaTL", "upTL") else 2, 9, 2):
            v = AlgebraVariant(kind, n)
            env = sample_env(4, kind, n)
            for dia in basis_enumerate(v):
                s, dr = reduce(dia, v, env)
                assert s == 1 and dr == dia


def test_reduce_rejects_odd_in_periodic():
    env = sample_env(2, "upTL", 5)
    with pytest.raises(ValueError):
        reduce(omega(5), AlgebraVariant("upTL", 5), env)


def test_reduce_rejects_wound_identity_in_periodic():
    env = sample_env(2, "upTL", 5)
    with pytest.raises(ValueError):
        reduce(omega(5, 2), AlgebraVariant("upTL", 5), env)


# -- mul ----------------------------------------------------------------------

def test_identity_neutral():
    env = sample_env(3, "uaTL", 5)
    alg = Algebra(AlgebraVariant("uaTL", 5), env)
    a = alg.e(0) * alg.omega() + 3 * alg.e(2)
    assert (alg.one() * a).equals(a)
    assert (a * alg.one()).equals(a)


def test_uptl1_EFE():
    env = sample_env(3, "upTL1", 4)
    alg = Algebra(AlgebraVariant("upTL1", 4), env)
    E = alg.e(0) * alg.e(2)
    F = alg.e(1) * alg.e(3)
    assert (E * F * E).equals(env.alpha ** 2 * E)


def test_uatl_unwinding_word_n5():
    # e_0 (e_4 e_3 e_2 e_1 e_0)^3 = gamma^2 e_0 in uaTL_5
    env = sample_env(3, "uaTL", 5)
    alg = Algebra(AlgebraVariant("uaTL", 5), env)
    word = alg.e(0)
    for _ in range(5 - 2):
        for j in (4, 3, 2, 1, 0):
            word = word * alg.e(j)
    assert word.equals(env.gamma ** 2 * alg.e(0))


def test_mul_associativity_uncoiled():
    rng = random.Random(6)
    for kind, n in [("uaTL", 5), ("upTL", 5), ("uaTL1", 4), ("upTL1", 4),
                    ("uaTL2", 6), ("upTL2", 6)]:
        env = sample_env(8, kind, n)
        alg = Algebra(AlgebraVariant(kind, n), env)
        if kind.startswith("ua"):
            gens = [alg.e(j) for j in range(n)] + [alg.omega(), alg.omega(-1)]
        else:
            gens = [alg.e(j) for j in range(n)]
        for _ in range(17):
            words = []
            for _ in range(3):
                w = alg.one()
                for _ in range(rng.randint(1, 3)):
                    w = w * rng.choice(gens)
                words.append(w)
            a, b, c = words
            assert ((a * b) * c).equals(a * (b * c))


def test_variant_mismatch():
    env = sample_env(3, "uaTL", 5)
    a = Algebra(AlgebraVariant("uaTL", 5), env).one()
    b = Algebra(AlgebraVariant("aTL", 5), env).one()
    with pytest.raises(ValueError):
        a * b


def test_max_terms_cap(monkeypatch):
    monkeypatch.setenv("UTL_MAX_TERMS", "2")
    env = sample_env(3, "aTL", 4)
    alg = Algebra(AlgebraVariant("aTL", 4), env)
    big = alg.one() + alg.e(1) + alg.e(2) + alg.omega()
    with pytest.raises(ResourceLimitError):
        big * big


# -- bases and dimensions -----------------------------------------------------

def test_basis_examples():
    assert len(basis_enumerate(AlgebraVariant("uaTL", 3))) == 12
    assert len(basis_enumerate(AlgebraVariant("upTL", 3))) == 10
    assert len(basis_enumerate(AlgebraVariant("uaTL1", 2))) == 6


def test_dimension_examples():
    assert dimension_closed_form(AlgebraVariant("uaTL", 5)) == 180
    assert dimension_closed_form(AlgebraVariant("upTL", 5)) == 176
    assert dimension_closed_form(AlgebraVariant("upTL1", 4)) == 53
    assert dimension_closed_form(AlgebraVariant("uaTL2", 6)) == 600


def test_infinite_variants_refused():
    for kind in ("aTL", "pTL"):
        with pytest.raises(InfiniteAlgebraError):
            basis_enumerate(AlgebraVariant(kind, 4))
        with pytest.raises(InfiniteAlgebraError):
            dimension_closed_form(AlgebraVariant(kind, 4))


def test_parity_constraints_on_variants():
    with pytest.raises(ValueError):
        AlgebraVariant("uaTL", 4)
    with pytest.raises(ValueError):
        AlgebraVariant("upTL1", 5)


def test_tl_embedding_catalan():
    # products of e_1..e_{n-1} never cross the seam; the reachable set is C_n
    for n in range(2, 7):
        env = sample_env(5, "pTL", n)
        seen = {identity(n)}
        frontier = [identity(n)]
        while frontier:
            nxt = []
            for c in frontier:
                for j in range(1, n):
                    from uncoiledtl.diagrams import multiply_raw
                    d, _, _ = multiply_raw(c, e(n, j))
                    assert d.bottom.crossing_count() == 0
                    assert d.top.crossing_count() == 0
                    if d not in seen:
                        seen.add(d)
                        nxt.append(d)
            frontier = nxt
        import math
        assert len(seen) == math.comb(2 * n, n) // (n + 1)


def test_tl_basis_is_catalan():
    import math
    for n in range(1, 7):
        v = AlgebraVariant("TL", n)
        cat = math.comb(2 * n, n) // (n + 1)
        assert dimension_closed_form(v) == cat
        assert len(basis_enumerate(v)) == cat


# -- psi ----------------------------------------------------------------------

def _psi_states_n10():
    v = st((9, True), (8, True), (7, True), (4, False), (3, False),
           (6, False), (5, False), (2, True), (1, True), (0, True))
    w = st((9, False), (8, False), (3, False), (2, False), (7, False),
           (6, False), (5, False), (4, False), (1, False), (0, False))
    return v, w


def test_psi_displayed_d0():
    v, w = _psi_states_n10()
    env = sample_env(3, "upTL1", 10)
    out = psi_bilinear(v, w, AlgebraVariant("pTL", 10), env)
    assert (out.coeff, out.power) == (env.beta, 3)  # beta f^3
    out = psi_bilinear(v, w, AlgebraVariant("uaTL1", 10),
                       sample_env(3, "uaTL1", 10))
    envs = sample_env(3, "uaTL1", 10)
    assert out.power == 0 and out.coeff == envs.alpha ** 3 * envs.beta
    out = psi_bilinear(v, w, AlgebraVariant("upTL1", 10), env)
    assert out.power == 1 and out.coeff == env.alpha ** 2 * env.beta


def test_psi_displayed_d2_vanishes():
    v = st((1, False), (0, False), (11, True), D, (9, False), (6, False),
           (5, False), (8, False), (7, False), (4, False), D, (2, True))
    w = st((11, True), D, (5, False), (4, False), (3, False), (2, False),
           D, (8, False), (7, False), (10, False), (9, False), (0, True))
    for kind in ("upTL1", "upTL2"):
        env = sample_env(3, kind, 12)
        out = psi_bilinear(v, w, AlgebraVariant(kind, 12), env)
        assert out.is_zero()


def test_psi_displayed_d3():
    v = st((12, True), (11, True), (10, True), (9, True), D,
           (6, False), (5, False), D, D, (3, True), (2, True),
           (1, True), (0, True))
    w = st((12, True), (8, False), (7, False), (4, False), (3, False),
           (6, False), (5, False), (2, False), (1, False), D, D, D,
           (0, True))
    env = sample_env(3, "uaTL", 13)
    out = psi_bilinear(v, w, AlgebraVariant("uaTL", 13), env)
    assert (out.coeff, out.power) == (env.beta ** 2 * env.gamma, 0)
    envp = sample_env(3, "upTL", 13)
    out = psi_bilinear(v, w, AlgebraVariant("upTL", 13), envp)
    assert (out.coeff, out.power) == (envp.beta ** 2, 3)


def test_psi_reproduces_sandwich_product():
    # C(b,m,t) C(b',m',t') = C(b, m + n(t,b') + m', t') times the psi scalar
    rng = random.Random(12)
    for kind, n in [("uaTL", 5), ("uaTL1", 4), ("uaTL2", 6)]:
        env = sample_env(9, kind, n)
        variant = AlgebraVariant(kind, n)
        alg = Algebra(variant, env)
        for _ in range(40):
            d = rng.choice([x for x in variant.defect_sectors() if x > 0])
            states = link_states(n, d)
            b, t, b2, t2 = (rng.choice(states) for _ in range(4))
            m1 = rng.randrange(d)
            m2 = rng.randrange(d)
            lhs = alg.from_diagram(Diagram(b, t, m1)) * \
                alg.from_diagram(Diagram(b2, t2, m2))
            val = psi_bilinear(b2, t, variant, env)  # upper state first
            # the law holds at the d level: a vanishing form means the
            # product dropped to fewer through-lines
            level = AlgebraElement(alg, {dd: c for dd, c in lhs.terms.items()
                                         if dd.d == d})
            if val.is_zero():
                assert level.is_zero()
                continue
            rhs = val.coeff * alg.from_diagram(Diagram(b, t2,
                                                       m1 + val.power + m2))
            assert level.equals(rhs)


def test_psi_defect_mismatch():
    env = sample_env(3, "uaTL", 5)
    with pytest.raises(ValueError):
        psi_bilinear(link_states(5, 1)[0], link_states(5, 3)[0],
                     AlgebraVariant("uaTL", 5), env)


def test_element_serialization():
    env = sample_env(3, "upTL1", 4)
    alg = Algebra(AlgebraVariant("upTL1", 4), env)
    a = alg.e(0) * alg.e(1) + Fraction(3, 7) * alg.one()
    doc = a.to_json()
    assert doc["variant"] == "upTL1" and doc["n"] == 4
    assert any(t["coeff"] == "3/7" for t in doc["terms"])
