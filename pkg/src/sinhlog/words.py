"""Exact free algebra of words over a digit alphabet.

Words over the alphabet {1,...,d} carry two products: concatenation and the
commutative shuffle.  Linear combinations with exact rational coefficients are
held in :class:`WordPoly`.  Everything here is pure and side-effect free, so
values can be shared freely between threads.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as _cartesian

MAX_ALPHABET = 9  # letters print as single digits, so d <= 9


class Word:
    """An immutable word; prints as a digit string, the empty word as 'e'."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        if isinstance(letters, Word):
            letters = letters.letters
        elif isinstance(letters, str):
            letters = () if letters in ("", "e") else tuple(int(c) for c in letters)
        lets = tuple(int(a) for a in letters)
        for a in lets:
            if not 1 <= a <= MAX_ALPHABET:
                raise ValueError("letter %r outside 1..%d" % (a, MAX_ALPHABET))
        self.letters = lets

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __hash__(self):
        return hash(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other):
        # length-then-lexicographic; fixes canonical printing and map order
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __repr__(self):
        return "".join(str(a) for a in self.letters) or "e"

    def sort_key(self):
        return (len(self.letters), self.letters)


EMPTY_WORD = Word()


def word(spec) -> Word:
    """Coerce a digit string / iterable / Word to a Word."""
    return spec if isinstance(spec, Word) else Word(spec)


def concat(u: Word, v: Word) -> Word:
    """Concatenation product of two words."""
    return Word(word(u).letters + word(v).letters)


def reversal(w: Word) -> Word:
    """Unsigned reversal of a word."""
    return Word(word(w).letters[::-1])


@lru_cache(maxsize=None)
def _shuffle_tuples(u: tuple, v: tuple):
    """All interleavings of u and v with multiplicities, as a tuple of pairs."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict = {}
    for t, m in _shuffle_tuples(u[1:], v):
        key = (u[0],) + t
        acc[key] = acc.get(key, 0) + m
    for t, m in _shuffle_tuples(u, v[1:]):
        key = (v[0],) + t
        acc[key] = acc.get(key, 0) + m
    return tuple(acc.items())


def _fmt_coeff(c) -> str:
    s = str(c)
    if any(op in s[1:] for op in "+-") or " " in s:
        return "(" + s + ")"
    return s


class WordPoly:
    """Finite rational (or duck-typed ring) linear combination of words.

    Stored zero coefficients are dropped on construction and after every
    operation, so equality is equality of term maps.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for w, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    w = word(w)
                    acc = self.terms.get(w, 0) + c
                    if acc:
                        self.terms[w] = acc
                    else:
                        self.terms.pop(w, None)

    @classmethod
    def zero(cls) -> "WordPoly":
        return cls()

    @classmethod
    def unit(cls) -> "WordPoly":
        return cls({EMPTY_WORD: Fraction(1)})

    @classmethod
    def from_word(cls, w, coeff=Fraction(1)) -> "WordPoly":
        return cls({word(w): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Word):
            other = WordPoly.from_word(other)
        if not isinstance(other, WordPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[w] == c for w, c in self.terms.items())

    def __hash__(self):
        return hash(frozenset((w, str(c)) for w, c in self.terms.items()))

    def __add__(self, other):
        if isinstance(other, Word):
            other = WordPoly.from_word(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w, 0) + c
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
        res = WordPoly()
        res.terms = out
        return res

    def __neg__(self):
        res = WordPoly()
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other if isinstance(other, WordPoly) else -WordPoly.from_word(other))

    def scaled(self, c) -> "WordPoly":
        if not c:
            return WordPoly()
        res = WordPoly()
        res.terms = {w: c * cw for w, cw in self.terms.items()}
        return res

    def __rmul__(self, c):
        return self.scaled(c)

    def coeff(self, w):
        return self.terms.get(word(w), 0)

    def grades(self):
        return sorted({len(w) for w in self.terms})

    def map_coeff(self, f) -> "WordPoly":
        return WordPoly({w: f(c) for w, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=Word.sort_key):
            c = self.terms[w]
            text = "%s*%s" % (_fmt_coeff(abs(c)) if isinstance(c, Fraction) else _fmt_coeff(c), w)
            if isinstance(c, Fraction) and c < 0:
                parts.append(("- ", text))
            else:
                parts.append(("+ ", text))
        sign0, text0 = parts[0]
        out = ("-" if sign0 == "- " else "") + text0
        for sign, text in parts[1:]:
            out += " " + sign + text
        return out


def _as_poly(p) -> WordPoly:
    return p if isinstance(p, WordPoly) else WordPoly.from_word(p)


def shuffle(p, q) -> WordPoly:
    """Shuffle product, extended bilinearly to word polynomials."""
    p, q = _as_poly(p), _as_poly(q)
    out: dict = {}
    for u, cu in p.terms.items():
        for v, cv in q.terms.items():
            c = cu * cv
            for t, m in _shuffle_tuples(u.letters, v.letters):
                w = Word(t)
                acc = out.get(w, 0) + m * c
                if acc:
                    out[w] = acc
                else:
                    out.pop(w, None)
    res = WordPoly()
    res.terms = out
    return res


def concat_mul(p, q) -> WordPoly:
    """Concatenation product, extended bilinearly to word polynomials."""
    p, q = _as_poly(p), _as_poly(q)
    out: dict = {}
    for u, cu in p.terms.items():
        for v, cv in q.terms.items():
            w = Word(u.letters + v.letters)
            acc = out.get(w, 0) + cu * cv
            if acc:
                out[w] = acc
            else:
                out.pop(w, None)
    res = WordPoly()
    res.terms = out
    return res


def antipode(w) -> WordPoly:
    """Signed reversal (-1)^|w| * reverse(w), extended linearly."""
    if isinstance(w, WordPoly):
        out = WordPoly()
        for u, c in w.terms.items():
            out = out + antipode(u).scaled(c)
        return out
    w = word(w)
    sign = Fraction(-1) if len(w) % 2 else Fraction(1)
    return WordPoly({reversal(w): sign})


def full_shuffle_of_letters(w) -> WordPoly:
    """Shuffle product of the individual letters of w, left to right."""
    w = word(w)
    if len(w) == 0:
        raise ValueError("empty word has no letter shuffle")
    out = WordPoly.from_word(Word((w.letters[0],)))
    for a in w.letters[1:]:
        out = shuffle(out, Word((a,)))
    return out


def words_of_length(d: int, n: int):
    """All words of exactly length n over {1..d}, in lexicographic order."""
    if not 1 <= d <= MAX_ALPHABET:
        raise ValueError("alphabet size must be in 1..%d" % MAX_ALPHABET)
    for lets in _cartesian(range(1, d + 1), repeat=n):
        yield Word(lets)


def all_words(d: int, max_len: int, min_len: int = 1):
    """All words with min_len <= |w| <= max_len, shortest first."""
    for n in range(min_len, max_len + 1):
        yield from words_of_length(d, n)
