"""Series coefficients K(w) for flow transforms F(x) = sum_k C_k (x-1)^k.

Three independent routes to the same coefficients are provided:

* :func:`transform_series` expands F on the grade-truncated signature inside
  the shuffle-concatenation tensor algebra,
* :func:`coefficient_via_operator` builds the grade-n operator polynomial
  sum_k C_{k+1} (c^{n-k} shuffled s^k) and applies it to the word,
* :func:`sinhlog_closed_form` is the closed form (w - antipode(w))/2 plus an
  epsilon multiple of the full letter shuffle, valid for the (partial)
  sinh-log coefficient sets.

The perturbation parameter of the partial sinh-log set is carried exactly,
either as a rational number or symbolically via :class:`EpsPoly`.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import comb

from .opalg import OpPoly, cs_power, evaluate, op_shuffle
from .words import (
    EMPTY_WORD,
    Word,
    WordPoly,
    antipode,
    concat,
    concat_mul,
    full_shuffle_of_letters,
    shuffle,
    word,
    words_of_length,
)


class EpsPoly:
    """Exact polynomial in the perturbation parameter.

    Coefficients are Fractions by default but any commutative ring elements
    supporting +, * and truthiness work (moment values, in particular).
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.c = tuple(cs)

    @classmethod
    def const(cls, x) -> "EpsPoly":
        return cls((x,))

    @classmethod
    def eps(cls) -> "EpsPoly":
        return cls((Fraction(0), Fraction(1)))

    @staticmethod
    def _coerce(x) -> "EpsPoly":
        return x if isinstance(x, EpsPoly) else EpsPoly((x,))

    @property
    def degree(self) -> int:
        return len(self.c) - 1 if self.c else -1

    def coeff(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else 0

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        o = EpsPoly._coerce(other) if not isinstance(other, EpsPoly) else other
        n = max(len(self.c), len(o.c))
        return all(self.coeff(k) == o.coeff(k) for k in range(n))

    def __hash__(self):
        return hash(tuple(str(x) for x in self.c))

    def __add__(self, other):
        o = EpsPoly._coerce(other)
        n = max(len(self.c), len(o.c))
        return EpsPoly(self.coeff(k) + o.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return EpsPoly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-EpsPoly._coerce(other))

    def __rsub__(self, other):
        return EpsPoly._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, EpsPoly):
            if not self.c or not other.c:
                return EpsPoly()
            out = [0] * (len(self.c) + len(other.c) - 1)
            for i, a in enumerate(self.c):
                for j, b in enumerate(other.c):
                    out[i + j] = out[i + j] + a * b
            return EpsPoly(out)
        return EpsPoly(x * other for x in self.c)

    __rmul__ = __mul__

    def map_coeff(self, f) -> "EpsPoly":
        return EpsPoly(f(x) for x in self.c)

    def __call__(self, value):
        """Evaluate at a numeric parameter value (Horner)."""
        acc = 0
        for x in reversed(self.c):
            acc = acc * value + x
        return acc

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for k, x in enumerate(self.c):
            if not x:
                continue
            base = "" if k == 0 else ("eps" if k == 1 else "eps^%d" % k)
            parts.append(("%s" % x) + ("*" + base if base else ""))
        return " + ".join(parts)


class CoefficientSet:
    """The sequence {C_k} defining a flow transform, C_1 = 1."""

    def __init__(self, kind: str, rule):
        self.kind = kind
        self._rule = rule
        if self.coeff(1) != 1:
            raise ValueError("coefficient sets must have C_1 = 1")

    def coeff(self, k: int):
        if k < 1:
            raise ValueError("coefficients are indexed from k = 1")
        return self._rule(k)

    @classmethod
    def log(cls) -> "CoefficientSet":
        return cls("log", lambda k: Fraction((-1) ** (k - 1), k))

    @classmethod
    def sinhlog(cls) -> "CoefficientSet":
        return cls("sinh-log", lambda k: Fraction(1) if k == 1 else Fraction((-1) ** (k - 1), 2))

    @classmethod
    def partial_sinhlog(cls, n: int, eps) -> "CoefficientSet":
        """Sinh-log coefficients with the grade-(n+1) coefficient offset by eps."""
        if n < 1:
            raise ValueError("truncation grade n must be >= 1")
        base = cls.sinhlog()

        def rule(k):
            c = base.coeff(k)
            return c + eps if k == n + 1 else c

        return cls("partial-sinh-log", rule)

    @classmethod
    def taylor(cls) -> "CoefficientSet":
        """The identity transform F(x) = x - 1 (stochastic Taylor truncation)."""
        return cls("taylor", lambda k: Fraction(1) if k == 1 else Fraction(0))

    @classmethod
    def custom(cls, rule) -> "CoefficientSet":
        return cls("custom", rule)

    def __repr__(self):
        return "CoefficientSet(%s)" % self.kind


class GradedTensorSeries:
    """Grade-truncated element of the shuffle (left) x concatenation (right)
    tensor algebra: per grade, a map from each right word to its left
    word-polynomial component."""

    __slots__ = ("n_max", "grades")

    def __init__(self, n_max: int, grades=None):
        self.n_max = n_max
        self.grades = [dict() for _ in range(n_max + 1)]
        if grades:
            for g, entries in enumerate(grades):
                for w, p in entries.items():
                    if p:
                        self.grades[g][word(w)] = p

    @classmethod
    def unit(cls, n_max: int) -> "GradedTensorSeries":
        out = cls(n_max)
        out.grades[0][EMPTY_WORD] = WordPoly.unit()
        return out

    def entry(self, w) -> WordPoly:
        w = word(w)
        return self.grades[len(w)].get(w, WordPoly.zero())

    def grade_map(self, g: int) -> dict:
        return self.grades[g]

    def _merge(self, g: int, w: Word, p: WordPoly):
        acc = self.grades[g].get(w)
        acc = p if acc is None else acc + p
        if acc:
            self.grades[g][w] = acc
        else:
            self.grades[g].pop(w, None)

    def __add__(self, other):
        out = GradedTensorSeries(self.n_max)
        for src in (self, other):
            for g in range(min(src.n_max, self.n_max) + 1):
                for w, p in src.grades[g].items():
                    out._merge(g, w, p)
        return out

    def __sub__(self, other):
        return self + other.scaled(Fraction(-1))

    def scaled(self, c) -> "GradedTensorSeries":
        out = GradedTensorSeries(self.n_max)
        if not c:
            return out
        for g in range(self.n_max + 1):
            for w, p in self.grades[g].items():
                q = p.scaled(c)
                if q:
                    out.grades[g][w] = q
        return out

    def mul(self, other) -> "GradedTensorSeries":
        """Truncated product: shuffle the left components, concatenate the
        right words."""
        out = GradedTensorSeries(self.n_max)
        for ga in range(self.n_max + 1):
            if not self.grades[ga]:
                continue
            for gb in range(self.n_max + 1 - ga):
                for x, p in self.grades[ga].items():
                    for y, q in other.grades[gb].items():
                        out._merge(ga + gb, concat(x, y), shuffle(p, q))
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedTensorSeries):
            return NotImplemented
        gmax = min(self.n_max, other.n_max)
        for g in range(gmax + 1):
            keys = set(self.grades[g]) | set(other.grades[g])
            for w in keys:
                if self.entry(w) != other.entry(w):
                    return False
        return True

    def __repr__(self):
        lines = []
        for g in range(self.n_max + 1):
            for w in sorted(self.grades[g], key=Word.sort_key):
                lines.append("(%s) (x) %s" % (self.grades[g][w], w))
        return "\n".join(lines) or "0"


def signature(n_max: int, d: int) -> GradedTensorSeries:
    """The truncated signature series: unit plus sum over words of w (x) w."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = GradedTensorSeries.unit(n_max)
    for n in range(1, n_max + 1):
        for w in words_of_length(d, n):
            out.grades[n][w] = WordPoly.from_word(w)
    return out


def transform_series(series: GradedTensorSeries, cset: CoefficientSet) -> GradedTensorSeries:
    """Apply F = sum_k C_k (. - unit)^k to a signature-like series.

    The grade-g component of the result maps each right word w to the
    coefficient polynomial K(w): the C_k weighted sum over all ways of
    cutting w into k subwords, each cut shuffled together.
    """
    if series.entry(EMPTY_WORD) != WordPoly.unit():
        raise ValueError("series must have unit grade-0 part")
    n_max = series.n_max
    x = series - GradedTensorSeries.unit(n_max)
    out = GradedTensorSeries(n_max)
    power = GradedTensorSeries.unit(n_max)
    for k in range(1, n_max + 1):
        power = power.mul(x)
        out = out + power.scaled(cset.coeff(k))
    return out


def coefficient_via_operator(w, cset: CoefficientSet) -> WordPoly:
    """K(w) through the operator algebra: apply
    sum_{k=0..n} C_{k+1} (c^{n-k} shuffled s^k) to w, with n = |w| - 1."""
    w = word(w)
    n = len(w) - 1
    if n < 0:
        raise ValueError("word must be nonempty")
    op = OpPoly.zero()
    for k in range(n + 1):
        op = op + op_shuffle("c" * (n - k), "s" * k).scaled(cset.coeff(k + 1))
    if not op:
        return WordPoly.zero()
    return evaluate(op, w)


def sinhlog_closed_form(w, eps) -> WordPoly:
    """Closed form of K(w) for the partial sinh-log set with n = |w| - 1:
    (w - antipode(w))/2 + eps * (shuffle of the letters of w)."""
    w = word(w)
    if len(w) == 0:
        raise ValueError("word must be nonempty")
    out = (WordPoly.from_word(w) - antipode(w)).scaled(Fraction(1, 2))
    if eps:
        out = out + full_shuffle_of_letters(w).scaled(eps)
    return out


def _descents(perm) -> int:
    return sum(1 for j in range(len(perm) - 1) if perm[j] > perm[j + 1])


def lie_coefficient(w) -> WordPoly:
    """Exponential-Lie (Magnus) coefficient of w as a word polynomial.

    Sum over permutations sigma of {1..|w|} of
    (-1)^{descents(sigma)} / (|w|^2 * binom(|w|-1, descents(sigma)))
    times the word whose i-th letter is taken from position sigma^{-1}(i).
    The permutation-action convention is pinned by the requirement that
    exponentiating the series reproduces the signature.
    """
    w = word(w)
    n = len(w)
    if n == 0:
        raise ValueError("word must be nonempty")
    out: dict = {}
    for perm in permutations(range(1, n + 1)):
        e = _descents(perm)
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p - 1] = i + 1
        u = Word(tuple(w.letters[inv[i] - 1] for i in range(n)))
        c = Fraction((-1) ** e, n * n * comb(n - 1, e))
        acc = out.get(u, 0) + c
        if acc:
            out[u] = acc
        else:
            out.pop(u, None)
    return WordPoly(out)


def bracket_expand(w) -> WordPoly:
    """Expand the right-nested commutator of the letters of w into words."""
    w = word(w)
    if len(w) == 0:
        raise ValueError("word must be nonempty")
    if len(w) == 1:
        return WordPoly.from_word(w)
    head = WordPoly.from_word(Word((w.letters[0],)))
    tail = bracket_expand(Word(w.letters[1:]))
    return concat_mul(head, tail) - concat_mul(tail, head)


def exp_of_lie_truncation(n_max: int, d: int) -> GradedTensorSeries:
    """Exponential (in the tensor-algebra product) of the truncated
    exponential-Lie series; reproduces the signature grade by grade."""
    if n_max > 5:
        raise ValueError("n_max above 5 is combinatorially unreasonable here")
    lie = GradedTensorSeries(n_max)
    for n in range(1, n_max + 1):
        for w in words_of_length(d, n):
            k_w = lie_coefficient(w)
            if not k_w:
                continue
            for x, c in bracket_expand(w).terms.items():
                lie._merge(n, x, k_w.scaled(c))
    out = GradedTensorSeries.unit(n_max)
    term = GradedTensorSeries.unit(n_max)
    for k in range(1, n_max + 1):
        term = term.mul(lie).scaled(Fraction(1, k))
        out = out + term
    return out


def reconstruct_from_sinhlog(series: GradedTensorSeries) -> GradedTensorSeries:
    """Invert the sinh-log transform inside the tensor algebra:
    psi |-> psi + sqrt(unit + psi^2), expanded to the series' grade cap."""
    n_max = series.n_max
    sq = series.mul(series)
    out = series + GradedTensorSeries.unit(n_max)
    power = GradedTensorSeries.unit(n_max)
    binom = Fraction(1)
    for j in range(1, n_max // 2 + 1):
        # binom(1/2, j) = binom(1/2, j-1) * (1/2 - (j-1)) / j
        binom = binom * (Fraction(1, 2) - (j - 1)) / j
        power = power.mul(sq)
        out = out + power.scaled(binom)
    return out
