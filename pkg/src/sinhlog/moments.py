"""Exact expectations of products of iterated Stratonovich/Ito integrals.

Multi-indices are tuples over {0, 1, ..., d} where 0 marks a time integral;
ordinary words (letters 1..d only) index Stratonovich integrals.  A
Stratonovich integral expands into Ito integrals over the conversion set of
its word: the word itself plus every multi-index reachable by repeatedly
replacing an adjacent equal pair of non-zero indices with a single 0, each
weighted by (1/2)^{number of zeros}.

Expected products of Ito integrals are computed by an exact recursion in the
interval length t.  Writing u = u' + (a,) and v = v' + (b,), the Ito product
rule gives, after taking expectations (the martingale parts drop out),

    d/dt E(I_u I_v) = [a == 0] E(I_u' I_v) + [b == 0] E(I_u I_v')
                      + [a == b != 0] E(I_u' I_v'),

with E(I_empty I_v) equal to t^m / m! when v consists of m zeros and zero
otherwise.  Each value is a polynomial in t with rational coefficients,
integrated term by term; results are memoized (the pair is symmetric).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from .coeffs import EpsPoly
from .words import Word, WordPoly, word


class MomentValue:
    """Polynomial in the interval length t with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for m, q in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if m < 0:
                    raise ValueError("powers of t must be >= 0")
                if q:
                    acc = self.c.get(m, 0) + q
                    if acc:
                        self.c[m] = acc
                    else:
                        del self.c[m]

    @classmethod
    def zero(cls) -> "MomentValue":
        return cls()

    @classmethod
    def one(cls) -> "MomentValue":
        return cls({0: Fraction(1)})

    @classmethod
    def monomial(cls, power: int, q) -> "MomentValue":
        return cls({power: q})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, MomentValue):
            return self.c == other.c
        if other == 0:
            return not self.c
        return self.c == {0: other}

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if not isinstance(other, MomentValue):
            if other == 0:
                return self
            other = MomentValue({0: other})
        out = dict(self.c)
        for m, q in other.c.items():
            acc = out.get(m, 0) + q
            if acc:
                out[m] = acc
            else:
                del out[m]
        res = MomentValue()
        res.c = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = MomentValue()
        res.c = {m: -q for m, q in self.c.items()}
        return res

    def __sub__(self, other):
        return self + (-other if isinstance(other, MomentValue) else MomentValue({0: -other}))

    def __mul__(self, other):
        if isinstance(other, MomentValue):
            out: dict = {}
            for m1, q1 in self.c.items():
                for m2, q2 in other.c.items():
                    m = m1 + m2
                    acc = out.get(m, 0) + q1 * q2
                    if acc:
                        out[m] = acc
                    else:
                        del out[m]
            res = MomentValue()
            res.c = out
            return res
        if not other:
            return MomentValue()
        res = MomentValue()
        res.c = {m: q * other for m, q in self.c.items()}
        return res

    __rmul__ = __mul__

    def integrate(self) -> "MomentValue":
        """Antiderivative vanishing at t = 0."""
        return MomentValue({m + 1: q / (m + 1) for m, q in self.c.items()})

    def degree(self) -> int:
        return max(self.c) if self.c else -1

    def __call__(self, t: float) -> float:
        return float(sum(float(q) * t ** m for m, q in self.c.items()))

    def subs(self, t: Fraction) -> Fraction:
        return sum((q * t ** m for m, q in self.c.items()), Fraction(0))

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for m in sorted(self.c):
            q = self.c[m]
            base = "1" if m == 0 else ("t" if m == 1 else "t^%d" % m)
            if q < 0:
                parts.append(("- ", "%s*%s" % (-q, base)))
            else:
                parts.append(("+ ", "%s*%s" % (q, base)))
        sign0, text0 = parts[0]
        out = ("-" if sign0 == "- " else "") + text0
        for sign, text in parts[1:]:
            out += " " + sign + text
        return out


def _as_index(u) -> tuple:
    if isinstance(u, Word):
        return u.letters
    return tuple(int(a) for a in u)


def strat_to_ito(w) -> dict:
    """Ito conversion combo of a Stratonovich word: map multi-index -> weight.

    Breadth-first closure under single adjacent-equal-pair replacement; the
    weight of a multi-index depends only on its own zero count, so arrival
    paths need no counting.
    """
    u0 = _as_index(word(w) if isinstance(w, (str, Word)) else w)
    if any(a == 0 for a in u0):
        raise ValueError("Stratonovich words contain no time component")
    seen = {u0}
    frontier = [u0]
    while frontier:
        nxt = []
        for u in frontier:
            for i in range(len(u) - 1):
                if u[i] != 0 and u[i] == u[i + 1]:
                    v = u[:i] + (0,) + u[i + 2:]
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
        frontier = nxt
    return {u: Fraction(1, 2 ** sum(1 for a in u if a == 0)) for u in seen}


@lru_cache(maxsize=None)
def _ito_moment(u: tuple, v: tuple) -> MomentValue:
    if not u and not v:
        return MomentValue.one()
    if not u or not v:
        m = u or v
        if all(a == 0 for a in m):
            return MomentValue.monomial(len(m), Fraction(1, factorial(len(m))))
        return MomentValue.zero()
    if u > v:  # symmetric in the pair
        return _ito_moment(v, u)
    a, b = u[-1], v[-1]
    rate = MomentValue.zero()
    if a == 0:
        rate = rate + _ito_moment(u[:-1], v)
    if b == 0:
        rate = rate + _ito_moment(u, v[:-1])
    if a == b and a != 0:
        rate = rate + _ito_moment(u[:-1], v[:-1])
    return rate.integrate()


def expect_ito_product(u, v) -> MomentValue:
    """Exact E(I_u I_v) over one interval of length t."""
    return _ito_moment(_as_index(u), _as_index(v))


@lru_cache(maxsize=None)
def _strat_moment(u: tuple, v: tuple) -> MomentValue:
    if u > v:
        return _strat_moment(v, u)
    out = MomentValue.zero()
    combo_u = strat_to_ito(u) if u else {(): Fraction(1)}
    combo_v = strat_to_ito(v) if v else {(): Fraction(1)}
    for up, cu in combo_u.items():
        for vp, cv in combo_v.items():
            m = _ito_moment(up, vp)
            if m:
                out = out + (cu * cv) * m
    return out


def expect_strat_product(u, v) -> MomentValue:
    """Exact E(J_u J_v) for Stratonovich words (either may be empty)."""
    return _strat_moment(_as_index(word(u) if isinstance(u, (str, Word)) else u),
                         _as_index(word(v) if isinstance(v, (str, Word)) else v))


def expect_single(w) -> MomentValue:
    """Exact E(J_w); nonzero only when every channel count in w is even."""
    return expect_strat_product(w, ())


def expect_poly_product(p: WordPoly, q: WordPoly):
    """Bilinear extension of expect_strat_product to word polynomials.

    Returns a MomentValue, or an EpsPoly of MomentValues when either input
    carries EpsPoly coefficients.
    """
    carries_eps = any(isinstance(c, EpsPoly) for c in p.terms.values()) or any(
        isinstance(c, EpsPoly) for c in q.terms.values())
    acc = EpsPoly() if carries_eps else MomentValue.zero()
    for u, cu in p.terms.items():
        for v, cv in q.terms.items():
            m = _strat_moment(u.letters, v.letters)
            if not m:
                continue
            c = cu * cv
            if carries_eps and not isinstance(c, EpsPoly):
                c = EpsPoly.const(c)
            acc = acc + c * m
    return acc
