import random
from fractions import Fraction

import pytest

from sinhlog.opalg import (
    OpPoly,
    antipode_operator,
    cs_power,
    evaluate,
    glue,
    op_concat,
    op_shuffle,
    partial_integration_rhs,
)
from sinhlog.words import WordPoly, antipode, concat, shuffle, word, words_of_length


def test_glue_examples():
    assert glue("c", "c") == OpPoly.from_word("csc")
    assert glue("cc", "s") == OpPoly.from_word("ccss")
    assert glue(glue("c", "c"), "c") == glue("c", glue("c", "c"))
    assert glue(glue("c", "c"), "c") == OpPoly.from_word("cscsc")


def test_op_shuffle_examples():
    assert op_shuffle("c", "s") == OpPoly({"cs": 1, "sc": 1})
    assert op_shuffle("cc", "s") == OpPoly({"ccs": 1, "csc": 1, "scc": 1})
    assert op_shuffle("c", "") == OpPoly.from_word("c")


def test_evaluate_examples():
    w = word("123")
    assert evaluate("cc", w) == WordPoly.from_word(w)
    assert evaluate("ss", w) == shuffle(shuffle(word("1"), word("2")), word("3"))
    assert evaluate("cs", w) == shuffle(word("12"), word("3"))
    assert evaluate("sc", w) == shuffle(word("1"), word("23"))


def test_evaluate_grade_mismatch():
    with pytest.raises(ValueError):
        evaluate("cs", word("12"))
    with pytest.raises(ValueError):
        evaluate(OpPoly.from_word("c"), word("123"))
    with pytest.raises(ValueError):
        evaluate("cx", word("123"))


def test_cs_power_examples():
    assert cs_power(0) == OpPoly.unit()
    assert cs_power(1) == OpPoly({"c": 1, "s": -1})
    assert cs_power(2) == OpPoly({"cc": 1, "cs": -1, "sc": -1, "ss": 1})
    assert antipode_operator(2) == OpPoly({"cc": -1, "cs": 1, "sc": 1, "ss": -1})


def test_partial_integration_examples():
    assert partial_integration_rhs(1) == OpPoly({"c": -1, "s": 1})
    assert partial_integration_rhs(2) == antipode_operator(2)
    for w in words_of_length(2, 4):
        assert evaluate(partial_integration_rhs(3), w) == antipode(w)


def test_partial_integration_identity():
    for n in range(1, 6):
        assert partial_integration_rhs(n) == antipode_operator(n)


def test_antipode_identity_small():
    for n in range(1, 4):
        op = cs_power(n)
        for w in words_of_length(2, n + 1):
            assert evaluate(op, w) == -antipode(w)
    assert evaluate(antipode_operator(1), word("12")) == antipode(word("12"))
    assert evaluate(antipode_operator(2), word("123")) == antipode(word("123"))


def rand_oppoly(rng, grade):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        b = "".join(rng.choice("cs") for _ in range(grade))
        terms[b] = terms.get(b, 0) + Fraction(rng.randint(-3, 3))
    return OpPoly(terms)


def test_evaluate_is_glue_homomorphism():
    rng = random.Random(5)
    for _ in range(40):
        g1, g2 = rng.randint(0, 2), rng.randint(0, 2)
        b1, b2 = rand_oppoly(rng, g1), rand_oppoly(rng, g2)
        u1 = word("".join(str(rng.randint(1, 2)) for _ in range(g1 + 1)))
        u2 = word("".join(str(rng.randint(1, 2)) for _ in range(g2 + 1)))
        lhs = evaluate(glue(b1, b2), concat(u1, u2))
        rhs = shuffle(evaluate(b1, u1), evaluate(b2, u2))
        assert lhs == rhs


def test_grade_bookkeeping():
    # c-run lengths of b = c^{n1} s ... s c^{nk} satisfy sum n_i + (k-1) = |b|
    from sinhlog.opalg import _run_lengths
    rng = random.Random(6)
    for _ in range(50):
        b = "".join(rng.choice("cs") for _ in range(rng.randint(1, 8)))
        runs = _run_lengths(b)
        assert sum(runs) + len(runs) - 1 == len(b)


def test_oppoly_homogeneity_enforced():
    with pytest.raises(ValueError):
        OpPoly({"c": 1, "cc": 1})
    with pytest.raises(ValueError):
        OpPoly({"cq": 1})


def test_oppoly_text_form():
    assert str(OpPoly({"cs": Fraction(1, 2), "sc": Fraction(-1)})) == "1/2*cs - 1*sc"
    assert str(OpPoly.zero()) == "0"
    assert str(OpPoly.unit()) == "1*1"


def test_op_concat():
    assert op_concat("cs", "c") == OpPoly.from_word("csc")
    a = OpPoly({"c": Fraction(2)})
    b = OpPoly({"s": Fraction(1, 2)})
    assert op_concat(a, b) == OpPoly({"cs": 1})
