"""Concatenation-shuffle operator algebra on the two-letter alphabet {c, s}.

An operator word of grade n (n letters from {c, s}) acts on words of length
n+1: the c's mark slots where adjacent letters stay concatenated, the s's mark
slots where the word is split and the pieces shuffled together.  Operator
words are plain strings like "csc"; :class:`OpPoly` holds homogeneous rational
combinations of them.
"""
from __future__ import annotations

from fractions import Fraction

from .words import Word, WordPoly, _shuffle_tuples, shuffle, word


def _check_opword(b: str) -> str:
    if not isinstance(b, str) or any(ch not in "cs" for ch in b):
        raise ValueError("operator word must be a string over {c, s}: %r" % (b,))
    return b


class OpPoly:
    """Homogeneous linear combination of operator words of one grade."""

    __slots__ = ("terms", "grade")

    def __init__(self, terms=None):
        self.terms = {}
        self.grade = None
        if terms:
            for b, c in (terms.items() if isinstance(terms, dict) else terms):
                if not c:
                    continue
                b = _check_opword(b)
                if self.grade is None:
                    self.grade = len(b)
                elif len(b) != self.grade:
                    raise ValueError("mixed grades %d and %d" % (self.grade, len(b)))
                acc = self.terms.get(b, 0) + c
                if acc:
                    self.terms[b] = acc
                else:
                    del self.terms[b]
        if not self.terms:
            self.grade = None

    @classmethod
    def zero(cls) -> "OpPoly":
        return cls()

    @classmethod
    def unit(cls) -> "OpPoly":
        """Grade-0 identity operator (the empty operator word)."""
        return cls({"": Fraction(1)})

    @classmethod
    def from_word(cls, b: str, coeff=Fraction(1)) -> "OpPoly":
        return cls({b: coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, str):
            other = OpPoly.from_word(other)
        if not isinstance(other, OpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        if isinstance(other, str):
            other = OpPoly.from_word(other)
        merged = list(self.terms.items()) + list(other.terms.items())
        return OpPoly(merged)

    def __neg__(self):
        res = OpPoly()
        res.terms = {b: -c for b, c in self.terms.items()}
        res.grade = self.grade
        return res

    def __sub__(self, other):
        return self + (-other if isinstance(other, OpPoly) else -OpPoly.from_word(other))

    def scaled(self, c) -> "OpPoly":
        if not c:
            return OpPoly()
        res = OpPoly()
        res.terms = {b: c * cb for b, cb in self.terms.items()}
        res.grade = self.grade
        return res

    def __rmul__(self, c):
        return self.scaled(c)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for b in sorted(self.terms):
            c = self.terms[b]
            name = b or "1"
            if isinstance(c, Fraction) and c < 0:
                parts.append(("- ", "%s*%s" % (-c, name)))
            else:
                parts.append(("+ ", "%s*%s" % (c, name)))
        sign0, text0 = parts[0]
        out = ("-" if sign0 == "- " else "") + text0
        for sign, text in parts[1:]:
            out += " " + sign + text
        return out


def _as_oppoly(b) -> OpPoly:
    return b if isinstance(b, OpPoly) else OpPoly.from_word(_check_opword(b))


def glue(b1, b2) -> OpPoly:
    """Shuffle gluing product: per word pair, concatenate as b1 + 's' + b2."""
    b1, b2 = _as_oppoly(b1), _as_oppoly(b2)
    out = []
    for u, cu in b1.terms.items():
        for v, cv in b2.terms.items():
            out.append((u + "s" + v, cu * cv))
    return OpPoly(out)


def op_concat(b1, b2) -> OpPoly:
    """Concatenation product of operator polynomials (operator composition slots)."""
    b1, b2 = _as_oppoly(b1), _as_oppoly(b2)
    out = []
    for u, cu in b1.terms.items():
        for v, cv in b2.terms.items():
            out.append((u + v, cu * cv))
    return OpPoly(out)


def op_shuffle(b1, b2) -> OpPoly:
    """Shuffle of operator words, same interleaving rule as for ordinary words."""
    b1, b2 = _as_oppoly(b1), _as_oppoly(b2)
    out = []
    for u, cu in b1.terms.items():
        for v, cv in b2.terms.items():
            c = cu * cv
            for t, m in _shuffle_tuples(tuple(u), tuple(v)):
                out.append(("".join(t), m * c))
    return OpPoly(out)


def _run_lengths(b: str):
    """Lengths of the c-runs of b: b = c^{n1} s c^{n2} s ... s c^{nk}."""
    return [len(run) for run in b.split("s")]


def evaluate(b, w) -> WordPoly:
    """Apply an operator (poly) of grade n to a word of length n+1.

    The word is cut into consecutive subwords whose lengths are one more than
    the c-run lengths of the operator word; the subwords are then shuffled
    together.  Extends bilinearly.
    """
    w = word(w)
    if isinstance(b, OpPoly):
        if not b:
            raise ValueError("cannot apply the zero operator: grade is undefined")
        if b.grade != len(w) - 1:
            raise ValueError("operator grade %d cannot act on |w| = %d" % (b.grade, len(w)))
        out = WordPoly()
        for bw, c in b.terms.items():
            out = out + evaluate(bw, w).scaled(c)
        return out
    b = _check_opword(b)
    if len(b) != len(w) - 1:
        raise ValueError("operator grade %d cannot act on |w| = %d" % (len(b), len(w)))
    runs = _run_lengths(b)
    pieces = []
    pos = 0
    for n_i in runs:
        pieces.append(Word(w.letters[pos:pos + n_i + 1]))
        pos += n_i + 1
    out = WordPoly.from_word(pieces[0])
    for piece in pieces[1:]:
        out = shuffle(out, piece)
    return out


def cs_power(n: int) -> OpPoly:
    """The grade-n operator polynomial sum_k (-1)^k (c^{n-k} shuffled with s^k)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return OpPoly.unit()
    out = OpPoly.zero()
    for k in range(n + 1):
        term = op_shuffle("c" * (n - k), "s" * k)
        out = out + term.scaled(Fraction((-1) ** k))
    return out


def antipode_operator(n: int) -> OpPoly:
    """The antipode on words of length n+1, as the operator -(c-s)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return -cs_power(n)


def partial_integration_rhs(n: int) -> OpPoly:
    """Right-hand side of the repeated-partial-integration recursion.

    -c^n - sum_{k=0}^{n-1} c^k s alpha_{n-k-1}, with the grade-0 base case
    alpha_0 = -(identity): the signed reversal of a single letter is its
    negative.  Equals antipode_operator(n) as an operator polynomial.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def alpha(j: int) -> OpPoly:
        return OpPoly({"": Fraction(-1)}) if j == 0 else antipode_operator(j)

    out = OpPoly.from_word("c" * n, Fraction(-1))
    for k in range(n):
        out = out - op_concat(OpPoly.from_word("c" * k + "s"), alpha(n - k - 1))
    return out
