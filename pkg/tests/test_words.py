import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from sinhlog.words import (
    EMPTY_WORD,
    Word,
    WordPoly,
    all_words,
    antipode,
    concat,
    concat_mul,
    full_shuffle_of_letters,
    reversal,
    shuffle,
    word,
    words_of_length,
)


def shuffle_oracle(u, v):
    """Independent shuffle: choose the positions of u among |u|+|v| slots."""
    out = {}
    n = len(u) + len(v)
    for pos in combinations(range(n), len(u)):
        letters = [None] * n
        it_u = iter(u.letters)
        for i in pos:
            letters[i] = next(it_u)
        it_v = iter(v.letters)
        for i in range(n):
            if letters[i] is None:
                letters[i] = next(it_v)
        w = Word(letters)
        out[w] = out.get(w, 0) + 1
    return WordPoly({w: Fraction(m) for w, m in out.items()})


def rand_word(rng, d, max_len, min_len=0):
    return Word([rng.randint(1, d) for _ in range(rng.randint(min_len, max_len))])


def test_concat_examples():
    assert concat(word("12"), word("3")) == word("123")
    assert concat(EMPTY_WORD, word("12")) == word("12")
    assert concat(word("11"), word("22")) == word("1122")


def test_reversal_examples():
    assert reversal(word("123")) == word("321")
    assert reversal(word("1")) == word("1")
    assert reversal(word("1221")) == word("1221")


def test_antipode_examples():
    assert antipode(word("1")) == WordPoly({word("1"): Fraction(-1)})
    assert antipode(word("12")) == WordPoly({word("21"): Fraction(1)})
    assert antipode(word("123")) == WordPoly({word("321"): Fraction(-1)})


def test_shuffle_examples():
    assert shuffle(word("1"), word("2")) == WordPoly({word("12"): 1, word("21"): 1})
    assert shuffle(word("1"), word("1")) == WordPoly({word("11"): 2})
    assert shuffle(word("12"), word("3")) == WordPoly(
        {word("123"): 1, word("132"): 1, word("312"): 1})
    w = word("1212")
    assert shuffle(EMPTY_WORD, w) == WordPoly.from_word(w)
    assert shuffle(w, EMPTY_WORD) == WordPoly.from_word(w)


def test_shuffle_matches_oracle():
    rng = random.Random(0)
    for _ in range(60):
        u, v = rand_word(rng, 3, 4), rand_word(rng, 3, 4)
        assert shuffle(u, v) == shuffle_oracle(u, v)


def test_shuffle_commutative_associative():
    rng = random.Random(1)
    for _ in range(40):
        u, v, t = (rand_word(rng, 3, 4) for _ in range(3))
        assert shuffle(u, v) == shuffle(v, u)
        assert shuffle(shuffle(u, v), t) == shuffle(u, shuffle(v, t))


def test_shuffle_multiplicity_sum():
    for lu in range(6):
        for lv in range(6):
            u = Word([1] * lu)
            v = Word([2] * lv)
            total = sum(shuffle(u, v).terms.values())
            assert total == comb(lu + lv, lu)


def test_shuffle_grading():
    rng = random.Random(2)
    for _ in range(30):
        u, v = rand_word(rng, 2, 5), rand_word(rng, 2, 5)
        assert all(len(w) == len(u) + len(v) for w in shuffle(u, v).terms)


def test_antipode_involution_and_morphism():
    rng = random.Random(3)
    for _ in range(30):
        w = rand_word(rng, 3, 5, min_len=1)
        assert antipode(antipode(w)) == WordPoly.from_word(w)
    for _ in range(20):
        u, v = rand_word(rng, 2, 4, min_len=1), rand_word(rng, 2, 4, min_len=1)
        assert antipode(shuffle(u, v)) == shuffle(antipode(u), antipode(v))


def test_full_shuffle_of_letters():
    assert full_shuffle_of_letters(word("12")) == WordPoly({word("12"): 1, word("21"): 1})
    assert full_shuffle_of_letters(word("11")) == WordPoly({word("11"): 2})
    expected = shuffle_oracle(word("1"), word("2"))
    expected = shuffle(expected, word("3"))
    assert full_shuffle_of_letters(word("123")) == expected
    assert len(full_shuffle_of_letters(word("123")).terms) == 6
    with pytest.raises(ValueError):
        full_shuffle_of_letters(EMPTY_WORD)


def test_concat_mul_bilinear():
    p = WordPoly({word("1"): Fraction(2), word("2"): Fraction(-1)})
    q = WordPoly({word("3"): Fraction(1, 2)})
    assert concat_mul(p, q) == WordPoly({word("13"): 1, word("23"): Fraction(-1, 2)})


def test_word_text_forms():
    assert str(word("121")) == "121"
    assert str(EMPTY_WORD) == "e"
    assert word("e") == EMPTY_WORD
    poly = WordPoly({word("12"): Fraction(1, 2), word("21"): Fraction(-1, 2)})
    assert str(poly) == "1/2*12 - 1/2*21"
    assert str(WordPoly.zero()) == "0"
    assert str(WordPoly.unit()) == "1*e"


def test_letter_validation():
    with pytest.raises(ValueError):
        Word([0])
    with pytest.raises(ValueError):
        Word([10])
    with pytest.raises(ValueError):
        list(words_of_length(12, 1))


def test_word_enumeration():
    assert len(list(words_of_length(2, 3))) == 8
    assert len(list(all_words(2, 3))) == 2 + 4 + 8
    assert sorted(all_words(2, 2), key=Word.sort_key)[0] == word("1")


def test_wordpoly_algebra():
    p = WordPoly({word("1"): Fraction(1)})
    q = WordPoly({word("1"): Fraction(-1)})
    assert not (p + q)
    assert (p - p) == WordPoly.zero()
    assert p.scaled(Fraction(0)) == WordPoly.zero()
    assert (Fraction(3) * p).coeff("1") == 3
