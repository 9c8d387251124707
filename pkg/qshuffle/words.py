"""
The free algebra on letters x, y with concatenation and Green's q-shuffle product.

Words are plain strings over ``"xy"``; the empty string is the unit.
"""
from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from .errors import UsageError
from .scalar import EXACT, Field, LaurentItems

Word = str
LETTERS = ("x", "y")
SIDES = ("left", "right")
ALTERNATING_KINDS = ("Wminus", "Wplus", "Gtilde", "G")

_SWAP = str.maketrans("xy", "yx")


def word_key(w: Word) -> Tuple[int, Word]:
    """Canonical order: by length, then lexicographic with x < y."""
    return (len(w), w)


def bar(letter: str) -> int:
    return 1 if letter == "x" else -1


def pairing(a: str, b: str) -> int:
    """<a, b>: 2 on equal letters, -2 otherwise (exponent of q)."""
    return 2 if a == b else -2


@lru_cache(maxsize=None)
def shuffle_words(u: Word, w: Word) -> Tuple[Tuple[Word, LaurentItems], ...]:
    """
    q-shuffle of two words.

    Returns ``(word, laurent)`` pairs where ``laurent`` lists ``(q_exponent, count)``,
    computed with u * w = u1((u2..ur) * w) + w1(u * (w2..ws)) q^{<w1,u1>+...+<w1,ur>}.
    """
    if not u:
        return ((w, ((0, 1),)),)
    if not w:
        return ((u, ((0, 1),)),)
    acc: Dict[Word, Dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for word, laurent in shuffle_words(u[1:], w):
        for e, c in laurent:
            acc[u[0] + word][e] += c
    weight = sum(pairing(w[0], a) for a in u)
    for word, laurent in shuffle_words(u, w[1:]):
        for e, c in laurent:
            acc[w[0] + word][e + weight] += c
    out = []
    for word in sorted(acc, key=word_key):
        laurent = tuple(sorted((e, c) for e, c in acc[word].items() if c))
        if laurent:
            out.append((word, laurent))
    return tuple(out)


class WordPoly:
    """
    Finite linear combination of words with coefficients in a field.

    :param field: coefficient field (exact or numeric)
    :param terms: mapping word -> coefficient; zero coefficients are dropped
    """

    __slots__ = ("field", "_terms")

    def __init__(self, field: Field = EXACT, terms: Optional[Dict[Word, Any]] = None):
        self.field = field
        self._terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def unit(cls, field: Field = EXACT) -> "WordPoly":
        return cls(field, {"": field.one()})

    @classmethod
    def word(cls, field: Field, w: Word, coeff: Any = None) -> "WordPoly":
        _check_word(w)
        return cls(field, {w: field.one() if coeff is None else coeff})

    @property
    def terms(self) -> List[Tuple[Word, Any]]:
        return sorted(self._terms.items(), key=lambda item: word_key(item[0]))

    def coefficient(self, w: Word) -> Any:
        return self._terms.get(w, self.field.zero())

    def words(self) -> List[Word]:
        return sorted(self._terms, key=word_key)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def max_length(self) -> Optional[int]:
        return max((len(w) for w in self._terms), default=None)

    def min_length(self) -> Optional[int]:
        return min((len(w) for w in self._terms), default=None)

    def is_homogeneous(self, length: int) -> bool:
        return all(len(w) == length for w in self._terms)

    def _check_field(self, other: "WordPoly"):
        if other.field != self.field:
            raise UsageError(f"cannot combine {self.field.name} and {other.field.name} coefficients")

    def __add__(self, other: "WordPoly") -> "WordPoly":
        self._check_field(other)
        terms = dict(self._terms)
        for w, c in other._terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return WordPoly(self.field, terms)

    def __neg__(self) -> "WordPoly":
        return WordPoly(self.field, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "WordPoly") -> "WordPoly":
        return self + (-other)

    def scale(self, c: Any) -> "WordPoly":
        if not c:
            return WordPoly(self.field)
        return WordPoly(self.field, {w: c * coeff for w, coeff in self._terms.items()})

    def concat(self, other: "WordPoly") -> "WordPoly":
        self._check_field(other)
        terms: Dict[Word, Any] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                w, c = a + b, ca * cb
                terms[w] = terms[w] + c if w in terms else c
        return WordPoly(self.field, terms)

    def shuffle(self, other: "WordPoly") -> "WordPoly":
        self._check_field(other)
        laurent_q = self.field.laurent_q
        terms: Dict[Word, Any] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                c = ca * cb
                for w, laurent in shuffle_words(a, b):
                    term = c if laurent == ((0, 1),) else c * laurent_q(laurent)
                    terms[w] = terms[w] + term if w in terms else term
        return WordPoly(self.field, terms)

    def map_words(self, fn: Callable[[Word], Optional[Word]]) -> "WordPoly":
        """Apply a word map; words sent to None are dropped. Colliding images add up."""
        terms: Dict[Word, Any] = {}
        for w, c in self._terms.items():
            image = fn(w)
            if image is None:
                continue
            terms[image] = terms[image] + c if image in terms else c
        return WordPoly(self.field, terms)

    def erase(self, side: str, letter: str) -> "WordPoly":
        _check_side_letter(side, letter)
        if side == "left":
            return self.map_words(lambda w: w[1:] if w[:1] == letter else None)
        return self.map_words(lambda w: w[:-1] if w[-1:] == letter else None)

    def letter_power(self, side: str, letter: str, exponent: int) -> "WordPoly":
        """
        Multiply by letter^exponent on one side: a negative exponent erases,
        a positive one concatenates.
        """
        _check_side_letter(side, letter)
        if exponent > 0:
            block = letter * exponent
            return self.map_words(lambda w: block + w if side == "left" else w + block)
        result = self
        for _ in range(-exponent):
            result = result.erase(side, letter)
        return result

    def swap(self) -> "WordPoly":
        return self.map_words(lambda w: w.translate(_SWAP))

    def reverse(self) -> "WordPoly":
        return self.map_words(lambda w: w[::-1])

    def zeta(self) -> "WordPoly":
        return self.map_words(lambda w: w[::-1].translate(_SWAP))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, WordPoly):
            return NotImplemented
        return not (self - other)

    __hash__ = None

    def __repr__(self):
        return f"WordPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{w or '1'}" for w, c in self.terms)

    def to_json(self) -> Dict[Word, Any]:
        return {w: self.field.coeff_to_json(c) for w, c in self.terms}

    @classmethod
    def from_json(cls, field: Field, data: Dict[Word, Any]) -> "WordPoly":
        return cls(field, {w: field.coeff_from_json(c) for w, c in data.items()})


def _check_word(w: Word):
    if set(w) - set(LETTERS):
        raise UsageError(f"words are strings over 'xy', but got {w!r}")


def _check_side_letter(side: str, letter: str):
    if side not in SIDES:
        raise UsageError(f"side must be one of {SIDES}, but got {side}")
    if letter not in LETTERS:
        raise UsageError(f"letter must be one of {LETTERS}, but got {letter}")


def concat(u: WordPoly, v: WordPoly) -> WordPoly:
    return u.concat(v)


def shuffle(u: WordPoly, v: WordPoly) -> WordPoly:
    return u.shuffle(v)


def zeta(p: WordPoly) -> WordPoly:
    """Reverse every word and swap x <-> y; an antiautomorphism of both products."""
    return p.zeta()


def swap_letters(p: WordPoly) -> WordPoly:
    """Swap x <-> y in place; an automorphism of both products."""
    return p.swap()


def erase(p: WordPoly, side: str, letter: str) -> WordPoly:
    return p.erase(side, letter)


def _catalan(prefix: str, open_count: int, remaining: int) -> Iterator[Word]:
    if remaining == 0:
        yield prefix
        return
    if open_count < remaining:
        yield from _catalan(prefix + "x", open_count + 1, remaining - 1)
    if open_count > 0:
        yield from _catalan(prefix + "y", open_count - 1, remaining - 1)


@lru_cache(maxsize=None)
def _catalan_tuple(n: int) -> Tuple[Word, ...]:
    return tuple(_catalan("", 0, 2 * n))


def catalan_words(n: int) -> List[Word]:
    """All Catalan words of length 2n in lexicographic order (x < y)."""
    if n < 0:
        raise UsageError(f"n must be >= 0, but got {n}")
    return list(_catalan_tuple(n))


def prefix_sums(w: Word) -> List[int]:
    sums, total = [], 0
    for letter in w:
        total += bar(letter)
        sums.append(total)
    return sums


def is_catalan(w: Word) -> bool:
    sums = prefix_sums(w)
    return all(s >= 0 for s in sums) and (not sums or sums[-1] == 0)


def height(w: Word) -> int:
    return max(prefix_sums(w), default=0)


def alternating_word(kind: str, n: int) -> Word:
    """W_{-n} = x(yx)^n, W_{n+1} = y(xy)^n, G~_n = (xy)^n, G_n = (yx)^n."""
    if n < 0:
        raise UsageError(f"n must be >= 0, but got {n}")
    if kind == "Wminus":
        return "x" + "yx" * n
    if kind == "Wplus":
        return "y" + "xy" * n
    if kind == "Gtilde":
        return "xy" * n
    if kind == "G":
        return "yx" * n
    raise UsageError(f"kind must be one of {ALTERNATING_KINDS}, but got {kind}")
