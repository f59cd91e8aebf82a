import math
import random

import pytest

from uncoiledtl.diagrams import (DEFECT, Diagram, LinkState, all_defect, e,
                                 flip, identity, link_states, multiply_raw,
                                 omega, omega_inv, parity, recanonicalize)

D = DEFECT


def st(*nodes):
    return LinkState(nodes)


def test_link_state_counts():
    for n in range(1, 9):
        for d in range(n % 2, n + 1, 2):
            assert len(link_states(n, d)) == math.comb(n, (n - d) // 2)
    with pytest.raises(ValueError):
        link_states(5, 2)


def test_b51_matches_displayed_set():
    want = {
        st(D, (2, False), (1, False), (4, False), (3, False)),
        st((4, True), D, (3, False), (2, False), (0, True)),
        st((1, False), (0, False), D, (4, False), (3, False)),
        st((4, True), (2, False), (1, False), D, (0, True)),
        st((1, False), (0, False), (3, False), (2, False), D),
        st(D, (4, False), (3, False), (2, False), (1, False)),
        st((2, True), D, (0, True), (4, False), (3, False)),
        st((4, True), (3, True), D, (1, True), (0, True)),
        st((1, False), (0, False), (4, True), D, (2, True)),
        st((3, False), (2, False), (1, False), (0, False), D),
    }
    assert set(link_states(5, 1)) == want


def test_b53_matches_displayed_set():
    want = {
        st(D, D, D, (4, False), (3, False)),
        st(D, D, (3, False), (2, False), D),
        st(D, (2, False), (1, False), D, D),
        st((1, False), (0, False), D, D, D),
        st((4, True), D, D, D, (0, True)),
    }
    assert set(link_states(5, 3)) == want


def test_all_defect_state():
    assert link_states(4, 4) == (all_defect(4),)


def test_parity_convention():
    # the inverted literature convention: 0 for odd, 1 for even crossings
    assert parity(all_defect(5)) == 1
    wrapped = st(D, (4, False), (3, False), (2, False), (1, False))
    assert parity(wrapped) == 1  # zero crossing arcs
    one_wrap = st((4, True), D, (3, False), (2, False), (0, True))
    assert parity(one_wrap) == 0
    two_wrap = st((4, True), (3, True), D, (1, True), (0, True))
    assert parity(two_wrap) == 1


def test_planarity_rejected():
    # {0,1} and {2,3} both crossing the seam would intersect
    with pytest.raises(ValueError):
        LinkState([(1, True), (0, True), (3, True), (2, True)])
    # overarched defect
    with pytest.raises(ValueError):
        LinkState([(2, False), D, (0, False)])
    # non-involutive pairing
    with pytest.raises(ValueError):
        LinkState([(1, False), (0, True)])


def test_generators():
    assert identity(4) == Diagram(all_defect(4), all_defect(4), 0)
    assert omega(4).mid == 1
    e1 = e(4, 1)
    assert e1.bottom == st((1, False), (0, False), D, D)
    assert e1.d == 2 and e1.mid == 0
    e0 = e(4, 0)
    assert e0.bottom == st((3, True), D, D, (0, True))
    with pytest.raises(ValueError):
        e(4, 4)


def test_omega_inverse_product():
    c, be, nc = multiply_raw(omega(4), omega_inv(4))
    assert c == identity(4) and be == 0 and nc == 0


def test_displayed_n6_product():
    # the worked product of the two displayed n = 6 connectivities
    c1 = Diagram(
        st((5, False), (2, False), (1, False), (4, False), (3, False), (0, False)),
        st((1, False), (0, False), (5, True), (4, False), (3, False), (2, True)),
        1)  # one non-contractible loop
    c2 = Diagram(
        st(D, D, (5, False), (4, False), (3, False), (2, False)),
        st((5, True), D, (3, False), (2, False), D, (0, True)),
        0)
    got, beta_exp, nc_gained = multiply_raw(c1, c2)
    want = Diagram(
        st((5, False), (2, False), (1, False), (4, False), (3, False), (0, False)),
        st((5, True), (4, False), (3, False), (2, False), (1, False), (0, True)),
        2)
    assert got == want
    assert beta_exp == 1
    assert nc_gained == 1  # one new loop; the result carries two in total
    # parities: even * odd = odd
    assert c1.is_even() and not c2.is_even() and not got.is_even()


def test_ej_squared():
    for n in (2, 3, 5):
        for j in range(n):
            c, be, nc = multiply_raw(e(n, j), e(n, j))
            assert c == e(n, j) and be == 1 and nc == 0


def test_eee_relation():
    for n in range(3, 9):
        for j in range(n):
            for pm in (1, -1):
                k = (j + pm) % n
                c1, b1, _ = multiply_raw(e(n, j), e(n, k))
                c2, b2, _ = multiply_raw(c1, e(n, j))
                assert c2 == e(n, j) and b1 + b2 == 0


def test_omega_conjugation_and_braid_relation():
    for n in range(3, 9):
        for j in range(n):
            c, _, _ = multiply_raw(omega(n), e(n, j))
            c, _, _ = multiply_raw(c, omega_inv(n))
            assert c == e(n, (j - 1) % n)
        lhs, bl, _ = multiply_raw(omega(n, 2), e(n, 1))
        rhs = e(n, n - 1)
        btot = 0
        for j in range(n - 2, 0, -1):
            rhs, b, _ = multiply_raw(rhs, e(n, j))
            btot += b
        assert lhs == rhs and bl == 0 and btot == 0


def test_e0_omega_e0_n2():
    c1, b1, n1 = multiply_raw(e(2, 0), omega(2))
    c2, b2, n2 = multiply_raw(c1, e(2, 0))
    assert c2.bottom == e(2, 0).bottom and c2.top == e(2, 0).top
    assert c2.mid == 1 and b1 + b2 == 0 and n1 + n2 == 1


def test_flip():
    for n in (3, 4):
        for j in range(1, n):
            assert flip(e(n, j)) == e(n, j)
        assert flip(omega(n)) == omega_inv(n)


def test_flip_involution_and_antihomomorphism():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.choice((2, 3, 4, 5, 6, 7, 8))
        pool = [identity(n), omega(n), omega_inv(n)] + \
            [e(n, j) for j in range(n)]
        a, b = rng.choice(pool), rng.choice(pool)
        ab, beta1, nc1 = multiply_raw(a, b)
        assert flip(flip(ab)) == ab
        ba, beta2, nc2 = multiply_raw(flip(b), flip(a))
        assert flip(ab) == ba and beta1 == beta2 and nc1 == nc2


def test_associativity_random_triples():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.choice((2, 3, 4, 5, 6))
        pool = [identity(n), omega(n), omega_inv(n)] + \
            [e(n, j) for j in range(n)]
        a, b, c = (rng.choice(pool) for _ in range(3))
        x, b1, n1 = multiply_raw(a, b)
        x, b1b, n1b = multiply_raw(x, c)
        y, b2, n2 = multiply_raw(b, c)
        y, b2b, n2b = multiply_raw(a, y)
        assert x == y
        assert b1 + b1b == b2 + b2b and n1 + n1b == n2 + n2b


def test_evenness_closure():
    for n in range(2, 7):
        evens = [identity(n)] + [e(n, j) for j in range(n)]
        for a in evens:
            for b in evens:
                c, _, _ = multiply_raw(a, b)
                assert c.is_even()


def test_canonicity_and_serialization():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.choice((2, 4, 5))
        pool = [identity(n), omega(n)] + [e(n, j) for j in range(n)]
        c, _, _ = multiply_raw(rng.choice(pool), rng.choice(pool))
        assert recanonicalize(c) == c
        assert Diagram.from_json(c.to_json()) == c


def test_art_rendering():
    v = e(5, 0).bottom
    assert v.art() == "<|||>"
    assert "O^1" in omega(3).art()


def test_generator_dispatcher():
    from uncoiledtl.diagrams import generator
    assert generator(4, "id") == identity(4)
    assert generator(4, "omega") == omega(4)
    assert generator(4, "omega_inv") == omega_inv(4)
    assert generator(4, "e3") == e(4, 3)
    with pytest.raises(ValueError):
        generator(4, "nosuch")
