import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realtheta import characteristics as chars
from realtheta import intmat
from realtheta.characteristics import ThetaCharacteristic
from realtheta.errors import DiasymmetricInput, NotSymplectic, TypeMismatch
from realtheta.intmat import RealType
from realtheta.siegel import (identity_element, make_real_modular, random_real_modular, random_symplectic,
                              symplectic_form)

ORTHO = [t for g in range(1, 7) for t in intmat.admissible_real_types(g) if t.eps == 1]


def brute(t, pred):
    m = intmat.standard_form(t).entries
    out = []
    for b in itertools.product((0, 1), repeat=t.g):
        if any(b[t.lam:]):
            continue
        if pred(intmat.quad_form(m, b)):
            out.append(b)
    return out


@pytest.mark.parametrize("beta, cls", [((3, -1), (1, 1)), ((0, 0), (0, 0)), ((2, 4, -6), (0, 0, 0))])
def test_canonical(beta, cls):
    assert chars.canonical(beta) == cls


@pytest.mark.parametrize("alpha, beta, p", [((1,), (1,), "odd"), ((0, 0), (1, 1), "even"), ((1, 1), (1, 1), "even")])
def test_parity(alpha, beta, p):
    assert chars.parity(ThetaCharacteristic(alpha, beta)) == p


def test_set_examples():
    assert chars.enumerate_O((2, 2, 1)) == [(1, 1)]
    assert chars.enumerate_O((3, 2, 1)) == [(1, 1, 0)]
    assert len(chars.enumerate_O((4, 4, 1))) == 6
    assert all((b[0] * b[2]) + (b[1] * b[3]) == 1 for b in chars.enumerate_O((4, 4, 1)))
    assert chars.enumerate_E((2, 2, 1)) == [(0, 0), (0, 1), (1, 0)]
    assert chars.enumerate_E((2, 0, 1)) == [(0, 0)]
    assert chars.enumerate_O((2, 0, 1)) == []
    assert len(chars.enumerate_E((4, 4, 1))) == 10
    assert chars.enumerate_T((2, 2, 1)) == [(0, 0), (0, 1), (1, 0)]
    assert len(chars.enumerate_T((4, 4, 1))) == 9
    assert chars.enumerate_T((3, 2, 1)) == [(0, 0, 0), (0, 1, 0), (1, 0, 0)]
    assert chars.enumerate_B((2, 2, 1)) == [(0, 0), (0, 1), (1, 0)]
    assert len(chars.enumerate_B((4, 4, 1))) == 9
    assert chars.enumerate_B((3, 2, 1)) == [(0, 0, 0), (0, 1, 0), (1, 0, 0)]


def test_diasymmetric_sets_rejected():
    for fn in (chars.enumerate_T, chars.enumerate_B):
        with pytest.raises(DiasymmetricInput):
            fn((3, 2, 0))


@pytest.mark.parametrize("t", ORTHO, ids=str)
def test_sets_match_brute_force_and_partition(t):
    o, e = chars.enumerate_O(t), chars.enumerate_E(t)
    assert o == brute(t, lambda q: q % 4 == 2)
    assert e == brute(t, lambda q: q % 4 == 0)
    assert not set(o) & set(e)
    assert len(o) + len(e) == 2 ** t.lam
    assert o == sorted(o) and e == sorted(e)


@pytest.mark.parametrize("t", [t for t in ORTHO if t.lam0 <= 4], ids=str)
def test_b_represents_t(t):
    b = chars.enumerate_B(t)
    assert len(b) == 3 ** t.lam0
    assert {chars.canonical(x) for x in b} == set(chars.enumerate_T(t))


def test_act_full_examples():
    c = ThetaCharacteristic((1, 0), (0, 0))
    assert chars.act_full(np.eye(4, dtype=int), c) == c
    assert chars.act_full(symplectic_form(2), c) == ThetaCharacteristic((0, 0), (1, 0))
    with pytest.raises(NotSymplectic):
        chars.act_full(2 * np.eye(4, dtype=int), c)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1), st.data())
@settings(max_examples=50, deadline=None)
def test_act_full_preserves_parity(g, seed, data):
    G = random_symplectic(g, np.random.default_rng(seed))
    bits = st.lists(st.integers(0, 1), min_size=g, max_size=g)
    c = ThetaCharacteristic(data.draw(bits), data.draw(bits))
    assert chars.parity(chars.act_full(G, c)) == chars.parity(c)


def test_act_reduced_examples():
    t = RealType(2, 2, 1)
    assert chars.act_reduced(identity_element(t), (1, 0)) == (1, 0)
    assert chars.act_reduced(make_real_modular([[0, 1], [1, 0]], t), (1, 0)) == (0, 1)
    with pytest.raises(TypeMismatch):
        chars.act_reduced(identity_element(t), (1, 0, 0))


@pytest.mark.parametrize("t", [t for t in ORTHO if t.g <= 5], ids=str)
def test_group_permutes_sets_and_full_action_agrees(t):
    o, e = set(chars.enumerate_O(t)), set(chars.enumerate_E(t))
    for seed in range(25):
        gm = random_real_modular(t, seed, 1 + seed % 5)
        assert {chars.act_reduced(gm, b) for b in o} == o
        assert {chars.act_reduced(gm, b) for b in e} == e
        G = gm.block()
        for b in itertools.islice(itertools.product((0, 1), repeat=t.g), 16):
            full = chars.act_full(G, ThetaCharacteristic.zero_alpha(b))
            assert full.alpha == (0,) * t.g
            assert full.beta == chars.act_reduced(gm, b)


def test_sign_symbol_examples():
    t = RealType(2, 2, 1)
    assert chars.sign_symbol((0, 0), (1, 0), t) == 1
    assert chars.sign_symbol((1, 1), (0, 0), t) == -1


@pytest.mark.parametrize("lam0", [1, 2, 3])
def test_negative_count_bound_small_box(lam0):
    t = RealType(2 * lam0, 2 * lam0, 1)
    bound = (3 ** lam0 - 1) // 2
    betas = chars.enumerate_B(t)
    ms = list(itertools.product(range(-2, 3), repeat=t.lam))
    table = chars.sign_symbol_table(ms, betas, t)
    assert (table.sum(axis=1) > 0).all()
    assert ((table == -1).sum(axis=1) <= bound).all()
    for m in ms[:: max(1, len(ms) // 50)]:
        assert chars.negative_count(m, t) == int((table[ms.index(m)] == -1).sum())
        assert [chars.sign_symbol(m, b, t) for b in betas] == list(table[ms.index(m)])
