from fractions import Fraction

import pytest

from sinhlog.coeffs import (
    CoefficientSet,
    EpsPoly,
    GradedTensorSeries,
    bracket_expand,
    coefficient_via_operator,
    exp_of_lie_truncation,
    lie_coefficient,
    reconstruct_from_sinhlog,
    signature,
    sinhlog_closed_form,
    transform_series,
)
from sinhlog.words import EMPTY_WORD, WordPoly, all_words, reversal, word


def test_epspoly_arithmetic():
    e = EpsPoly.eps()
    half = Fraction(1, 2)
    p = half + e  # via __radd__ coercion
    assert isinstance(p, EpsPoly)
    assert p.coeff(0) == half and p.coeff(1) == 1
    assert (e * e).degree == 2
    assert (p - p) == 0 and not (p - p)
    assert p(Fraction(1, 4)) == Fraction(3, 4)
    assert EpsPoly.const(half) == half
    assert str(e) == "1*eps"


def test_coefficient_sets():
    lg = CoefficientSet.log()
    assert [lg.coeff(k) for k in (1, 2, 3, 4)] == [1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]
    sl = CoefficientSet.sinhlog()
    assert [sl.coeff(k) for k in (1, 2, 3, 4)] == [1, Fraction(-1, 2), Fraction(1, 2), Fraction(-1, 2)]
    ps = CoefficientSet.partial_sinhlog(2, Fraction(1, 6))
    assert ps.coeff(2) == Fraction(-1, 2)
    assert ps.coeff(3) == Fraction(1, 2) + Fraction(1, 6)
    with pytest.raises(ValueError):
        CoefficientSet.custom(lambda k: Fraction(2))


def test_signature_shape():
    sig = signature(3, 2)
    assert sig.entry(EMPTY_WORD) == WordPoly.unit()
    assert sig.entry("1") == WordPoly.from_word("1")
    assert sig.entry("11") == WordPoly.from_word("11")
    assert len(sig.grade_map(3)) == 8
    assert len(signature(2, 1).grade_map(2)) == 1


def test_transform_series_examples():
    sig = signature(2, 2)
    half = Fraction(1, 2)
    sl = transform_series(sig, CoefficientSet.sinhlog())
    assert sl.entry("12") == WordPoly({word("12"): half, word("21"): -half})
    lg = transform_series(sig, CoefficientSet.log())
    assert lg.entry("12") == WordPoly({word("12"): half, word("21"): -half})
    ps = transform_series(sig, CoefficientSet.partial_sinhlog(1, EpsPoly.eps()))
    e = EpsPoly.eps()
    assert ps.entry("12") == WordPoly({word("12"): half + e, word("21"): e - half})


def test_closed_form_examples():
    half = Fraction(1, 2)
    assert sinhlog_closed_form("12", Fraction(0)) == WordPoly(
        {word("12"): half, word("21"): -half})
    assert sinhlog_closed_form("12", Fraction(1, 4)) == WordPoly(
        {word("12"): Fraction(3, 4), word("21"): Fraction(-1, 4)})
    assert sinhlog_closed_form("11", Fraction(0)) == WordPoly.zero()
    assert sinhlog_closed_form("1", Fraction(0)) == WordPoly.from_word("1")


def test_triple_agreement():
    for cset in (CoefficientSet.sinhlog(), CoefficientSet.log()):
        series = transform_series(signature(4, 2), cset)
        for w in all_words(2, 4):
            assert series.entry(w) == coefficient_via_operator(w, cset)
    # symbolic perturbation of the top coefficient, per word length
    e = EpsPoly.eps()
    for w in all_words(2, 4):
        n = len(w) - 1
        if n < 1:
            continue
        cset = CoefficientSet.partial_sinhlog(n, e)
        a = transform_series(signature(len(w), 2), cset).entry(w)
        b = coefficient_via_operator(w, cset)
        c = sinhlog_closed_form(w, e)
        assert a == b == c


def test_even_palindromes_vanish():
    for w in all_words(2, 4):
        if len(w) % 2 == 0 and reversal(w) == w:
            assert sinhlog_closed_form(w, Fraction(0)) == WordPoly.zero()


def test_lie_coefficient_examples():
    assert lie_coefficient("1") == WordPoly.from_word("1")
    q = Fraction(1, 4)
    assert lie_coefficient("12") == WordPoly({word("12"): q, word("21"): -q})
    assert lie_coefficient("11") == WordPoly.zero()


def test_bracket_expand_examples():
    assert bracket_expand("1") == WordPoly.from_word("1")
    assert bracket_expand("12") == WordPoly({word("12"): 1, word("21"): -1})
    assert bracket_expand("112") == WordPoly(
        {word("112"): 1, word("121"): -2, word("211"): 1})


def test_exp_of_lie_reproduces_signature():
    assert exp_of_lie_truncation(3, 2) == signature(3, 2)
    with pytest.raises(ValueError):
        exp_of_lie_truncation(6, 2)


def test_sinhlog_roundtrip():
    sig = signature(4, 2)
    psi = transform_series(sig, CoefficientSet.sinhlog())
    assert reconstruct_from_sinhlog(psi) == sig


def test_series_requires_unit():
    bad = GradedTensorSeries(2)
    with pytest.raises(ValueError):
        transform_series(bad, CoefficientSet.sinhlog())
