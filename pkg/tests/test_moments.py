import random
from fractions import Fraction

import pytest

from sinhlog.coeffs import EpsPoly
from sinhlog.moments import (
    MomentValue,
    expect_ito_product,
    expect_poly_product,
    expect_single,
    expect_strat_product,
    strat_to_ito,
)
from sinhlog.words import WordPoly, all_words, antipode, reversal, shuffle, word


def mono(p, q):
    return MomentValue({p: Fraction(q)})


def test_strat_to_ito_examples():
    assert strat_to_ito("12") == {(1, 2): Fraction(1)}
    assert strat_to_ito("11") == {(1, 1): Fraction(1), (0,): Fraction(1, 2)}
    assert strat_to_ito("111") == {
        (1, 1, 1): Fraction(1), (0, 1): Fraction(1, 2), (1, 0): Fraction(1, 2)}
    with pytest.raises(ValueError):
        strat_to_ito((1, 0, 1))


def test_ito_moment_examples():
    assert expect_ito_product((1,), (1,)) == mono(1, 1)
    assert expect_ito_product((1,), (2,)) == MomentValue.zero()
    assert expect_ito_product((1, 2), (1, 2)) == mono(2, Fraction(1, 2))
    assert expect_ito_product((1, 1), (0,)) == MomentValue.zero()
    assert expect_ito_product((), ()) == MomentValue.one()
    assert expect_ito_product((), (0, 0)) == mono(2, Fraction(1, 2))


def test_strat_moment_against_gaussian_oracles():
    # J_11 = W^2/2, so E(J_11^2) = E(W^4)/4 = 3t^2/4
    assert expect_strat_product("11", "11") == mono(2, Fraction(3, 4))
    # independent channels leave the Ito value untouched
    assert expect_strat_product("12", "12") == mono(2, Fraction(1, 2))
    # odd letter count in channel 1
    assert expect_strat_product("1", "11") == MomentValue.zero()
    # J_111 = W^3/6: E(J_111 J_1) = E(W^4)/6 = t^2/2
    assert expect_strat_product("111", "1") == mono(2, Fraction(1, 2))
    # E(J_222^2) = E(W^6)/36 = 15 t^3/36
    assert expect_strat_product("222", "222") == mono(3, Fraction(5, 12))


def test_expect_single_examples():
    assert expect_single("11") == mono(1, Fraction(1, 2))
    assert expect_single("12") == MomentValue.zero()
    assert expect_single("1122") == mono(2, Fraction(1, 8))
    assert expect_single("1111") == mono(2, Fraction(1, 8))
    assert expect_single("1221") == MomentValue.zero()


def test_poly_product_examples():
    half = Fraction(1, 2)
    p = WordPoly({word("12"): half, word("21"): -half})
    # E((J_12 - J_21)^2)/4 with E(J_12 J_21) = 0
    assert expect_poly_product(p, p) == mono(2, Fraction(1, 4))
    assert expect_poly_product(p, WordPoly.zero()) == MomentValue.zero()
    sh = shuffle(word("1"), word("2"))
    # E((J_1 J_2)^2) = t^2 for independent channels
    assert expect_poly_product(sh, sh) == mono(2, 1)


def test_poly_product_eps_variant():
    e = EpsPoly.eps()
    p = WordPoly({word("11"): EpsPoly.const(Fraction(1)) + e})
    out = expect_poly_product(p, p)
    assert isinstance(out, EpsPoly)
    base = expect_strat_product("11", "11")
    assert out.coeff(0) == base
    assert out.coeff(1) == 2 * base
    assert out.coeff(2) == base


def test_reversal_invariance():
    for u in all_words(2, 3):
        for v in all_words(2, 3):
            assert expect_strat_product(u, v) == expect_strat_product(
                reversal(u), reversal(v))


def test_single_letter_lemma():
    half = Fraction(1, 2)
    for a in all_words(2, 1):
        pa = WordPoly.from_word(a)
        for w in all_words(2, 4):
            lhs = expect_strat_product(a, w)
            rhs = expect_poly_product(pa, (WordPoly.from_word(w) - antipode(w)).scaled(half))
            assert lhs == rhs


def test_parity():
    rng = random.Random(9)
    for _ in range(100):
        u = word("".join(str(rng.randint(1, 2)) for _ in range(rng.randint(1, 4))))
        v = word("".join(str(rng.randint(1, 2)) for _ in range(rng.randint(1, 4))))
        counts = {}
        for a in list(u.letters) + list(v.letters):
            counts[a] = counts.get(a, 0) + 1
        if any(c % 2 for c in counts.values()):
            assert expect_strat_product(u, v) == MomentValue.zero()


def test_ito_degree():
    # any nonzero E(I_u I_v) is a single monomial of degree l(u) + zeros(u) + zeros(v)
    rng = random.Random(10)
    for _ in range(200):
        u = tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 4)))
        v = tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 4)))
        m = expect_ito_product(u, v)
        if m:
            ell = sum(1 for a in u if a)
            deg = ell + sum(1 for a in u if not a) + sum(1 for a in v if not a)
            assert list(m.c.keys()) == [deg]


def test_moment_value_text_and_eval():
    m = mono(2, Fraction(3, 4))
    assert str(m) == "3/4*t^2"
    assert str(MomentValue.zero()) == "0"
    assert str(mono(1, Fraction(1, 2))) == "1/2*t"
    assert m(2.0) == 3.0
    assert m.subs(Fraction(2)) == 3
    assert (m + mono(2, Fraction(1, 4))) == mono(2, 1)
    assert (m - m) == MomentValue.zero()
    assert (mono(1, 2) * mono(1, 3)) == mono(2, 6)
