"""
Truncated Laurent series in (t, s, k) with word-polynomial coefficients.

Exponent vectors are always ``(e_t, e_s, e_k)``. The truncation bound
``degree`` limits e_t + e_s; ``None`` means an exact Laurent polynomial.
k is never truncated.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

from .errors import GradingError, UsageError
from .scalar import EXACT, Field
from .words import WordPoly, alternating_word, bar, catalan_words

logger = logging.getLogger(__name__)

VARIABLES = ("t", "s", "k")
Exponent = Tuple[int, int, int]
ZERO_EXP: Exponent = (0, 0, 0)


def _min_degree(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def total_degree(exp: Exponent) -> int:
    return exp[0] + exp[1]


@dataclass(frozen=True)
class MonomialArg:
    """
    A substitution argument ``sign * v^vpow * t^a * s^b``.

    :param vpow: power of v = q^{1/2}
    :param exps: exponents of (t, s)
    :param sign: +1 or -1
    """

    vpow: int = 0
    exps: Tuple[int, int] = (1, 0)
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise UsageError(f"sign must be 1 or -1, but got {self.sign}")
        if len(self.exps) != 2:
            raise UsageError(f"exps must give the (t, s) exponents, but got {self.exps}")

    @property
    def degree(self) -> int:
        return self.exps[0] + self.exps[1]

    def times_v(self, k: int) -> "MonomialArg":
        return MonomialArg(self.vpow + k, self.exps, self.sign)

    def power(self, n: int) -> "MonomialArg":
        return MonomialArg(self.vpow * n, (self.exps[0] * n, self.exps[1] * n), self.sign ** (n % 2))

    def inverse(self) -> "MonomialArg":
        return self.power(-1)

    def compose(self, other: "MonomialArg", var: int = 0) -> "MonomialArg":
        """Substitute ``other`` for variable ``var`` inside this argument."""
        n = self.exps[var]
        inner = other.power(n)
        rest = list(self.exps)
        rest[var] = 0
        return MonomialArg(self.vpow + inner.vpow,
                           (rest[0] + inner.exps[0], rest[1] + inner.exps[1]),
                           self.sign * inner.sign)

    def coefficient(self, field: Field, n: int) -> Any:
        """The scalar factor of arg^n."""
        c = field.vpow(self.vpow * n)
        return -c if self.sign == -1 and n % 2 else c

    def exponent(self, n: int) -> Exponent:
        return (self.exps[0] * n, self.exps[1] * n, 0)

    def __str__(self):
        parts = []
        if self.sign == -1:
            parts.append("-")
        if self.vpow:
            parts.append(f"v^{self.vpow}")
        for name, e in zip("ts", self.exps):
            if e:
                parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) or "1"


T = MonomialArg()
S = MonomialArg(exps=(0, 1))


class MultiSeries:
    """
    Map exponent vector -> :class:`WordPoly`, truncated at total (t, s)-degree.

    :param field: coefficient field shared by all coefficients
    :param terms: exponent -> WordPoly; zero polys and terms above ``degree`` are dropped
    :param degree: truncation bound D, or None for an exact Laurent polynomial
    """

    __slots__ = ("field", "degree", "_terms")

    def __init__(self, field: Field = EXACT, terms: Optional[Dict[Exponent, WordPoly]] = None,
                 degree: Optional[int] = None):
        self.field = field
        self.degree = degree
        self._terms = {
            tuple(exp): poly for exp, poly in (terms or {}).items()
            if poly and (degree is None or total_degree(exp) <= degree)
        }

    @classmethod
    def constant(cls, field: Field, value: Any, degree: Optional[int] = None) -> "MultiSeries":
        poly = value if isinstance(value, WordPoly) else WordPoly(field, {"": value})
        return cls(field, {ZERO_EXP: poly}, degree)

    @classmethod
    def monomial(cls, field: Field, exp: Exponent, poly: WordPoly,
                 degree: Optional[int] = None) -> "MultiSeries":
        return cls(field, {tuple(exp): poly}, degree)

    @property
    def terms(self) -> List[Tuple[Exponent, WordPoly]]:
        return sorted(self._terms.items())

    @property
    def variables(self) -> Tuple[str, ...]:
        used = [any(exp[i] for exp in self._terms) for i in range(3)]
        return tuple(name for name, u in zip(VARIABLES, used) if u)

    def exponents(self) -> List[Exponent]:
        return sorted(self._terms)

    def coefficient_of(self, exp: Exponent) -> WordPoly:
        return self._terms.get(tuple(exp), WordPoly(self.field))

    def __bool__(self):
        return bool(self._terms)

    def _check_field(self, other: "MultiSeries"):
        if other.field != self.field:
            raise UsageError(f"cannot combine {self.field.name} and {other.field.name} series")

    def _coerce(self, other: Any) -> "MultiSeries":
        if isinstance(other, MultiSeries):
            self._check_field(other)
            return other
        return MultiSeries.constant(self.field, other)

    def __add__(self, other: Any) -> "MultiSeries":
        other = self._coerce(other)
        degree = _min_degree(self.degree, other.degree)
        terms = dict(self._terms)
        for exp, poly in other._terms.items():
            terms[exp] = terms[exp] + poly if exp in terms else poly
        return MultiSeries(self.field, terms, degree)

    __radd__ = __add__

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(self.field, {e: -p for e, p in self._terms.items()}, self.degree)

    def __sub__(self, other: Any) -> "MultiSeries":
        return self + (-self._coerce(other))

    def scale(self, c: Any) -> "MultiSeries":
        """scalar_mul: multiply every coefficient by a central scalar."""
        return MultiSeries(self.field, {e: p.scale(c) for e, p in self._terms.items()}, self.degree)

    def _has_negative_degree(self) -> bool:
        return any(total_degree(exp) < 0 for exp in self._terms)

    def _product(self, other: "MultiSeries", op: Callable[[WordPoly, WordPoly], WordPoly]) -> "MultiSeries":
        self._check_field(other)
        degree = _min_degree(self.degree, other.degree)
        if degree is not None and (self._has_negative_degree() or other._has_negative_degree()):
            raise GradingError("truncated product with a negative-degree operand is not exact")
        terms: Dict[Exponent, WordPoly] = {}
        for e1, p1 in self._terms.items():
            for e2, p2 in other._terms.items():
                exp = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                if degree is not None and total_degree(exp) > degree:
                    continue
                product = op(p1, p2)
                terms[exp] = terms[exp] + product if exp in terms else product
        return MultiSeries(self.field, terms, degree)

    def shuffle_mul(self, other: "MultiSeries") -> "MultiSeries":
        return self._product(other, WordPoly.shuffle)

    def concat_mul(self, other: "MultiSeries") -> "MultiSeries":
        return self._product(other, WordPoly.concat)

    def map_coefficients(self, fn: Callable[[WordPoly], WordPoly]) -> "MultiSeries":
        return MultiSeries(self.field, {e: fn(p) for e, p in self._terms.items()}, self.degree)

    def erase_map(self, side: str, letter: str) -> "MultiSeries":
        return self.map_coefficients(lambda p: p.erase(side, letter))

    def letter_power(self, side: str, letter: str, exponent: int) -> "MultiSeries":
        return self.map_coefficients(lambda p: p.letter_power(side, letter, exponent))

    def swap_map(self) -> "MultiSeries":
        return self.map_coefficients(WordPoly.swap)

    def zeta_map(self) -> "MultiSeries":
        return self.map_coefficients(WordPoly.zeta)

    def shift(self, exp: Exponent) -> "MultiSeries":
        """Multiply by the monomial t^a s^b k^c; the known range moves with it."""
        a, b, c = exp
        degree = None if self.degree is None else self.degree + a + b
        return MultiSeries(self.field,
                           {(e[0] + a, e[1] + b, e[2] + c): p for e, p in self._terms.items()},
                           degree)

    def truncate(self, degree: Optional[int]) -> "MultiSeries":
        return MultiSeries(self.field, self._terms, _min_degree(self.degree, degree))

    def substitute(self, arg: MonomialArg, var: int = 0) -> "MultiSeries":
        """
        Replace variable ``var`` (0 = t, 1 = s) by ``arg``.

        :raise qshuffle.UsageError: for a truncated series and an argument whose degree is not 1.
        """
        if var not in (0, 1):
            raise UsageError(f"only t (0) or s (1) can be substituted, but got {var}")
        if self.degree is not None and arg.degree != 1:
            raise UsageError(f"truncated series only accept degree-1 arguments, but got {arg}")
        terms: Dict[Exponent, WordPoly] = {}
        for exp, poly in self._terms.items():
            n = exp[var]
            rest = list(exp)
            rest[var] = 0
            shifted = arg.exponent(n)
            new = (rest[0] + shifted[0], rest[1] + shifted[1], rest[2])
            image = poly.scale(arg.coefficient(self.field, n))
            terms[new] = terms[new] + image if new in terms else image
        return MultiSeries(self.field, terms, self.degree)

    def at_k_one(self) -> "MultiSeries":
        terms: Dict[Exponent, WordPoly] = {}
        for exp, poly in self._terms.items():
            new = (exp[0], exp[1], 0)
            terms[new] = terms[new] + poly if new in terms else poly
        return MultiSeries(self.field, terms, self.degree)

    def check_grading(self, offset: int = 0):
        """
        Assert that every word has length total_degree + offset.

        :raise qshuffle.GradingError: on the first violating monomial.
        """
        for exp, poly in self._terms.items():
            if not poly.is_homogeneous(total_degree(exp) + offset):
                raise GradingError(f"monomial {exp} carries words {poly.words()} "
                                   f"of length other than {total_degree(exp) + offset}")

    def difference_witness(self, other: Any) -> Optional[Tuple[Exponent, WordPoly]]:
        """First monomial (in exponent order) where the two series differ up to the common bound."""
        diff = self - self._coerce(other)
        for exp, poly in diff.terms:
            return exp, poly
        return None

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.difference_witness(other) is None

    __hash__ = None

    def __iter__(self) -> Iterator[Tuple[Exponent, WordPoly]]:
        return iter(self.terms)

    def __repr__(self):
        return f"MultiSeries(degree={self.degree}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for exp, poly in self.terms:
            mono = "*".join(f"{n}^{e}" for n, e in zip(VARIABLES, exp) if e)
            out.append(f"[{poly}]" + (f"*{mono}" if mono else ""))
        return " + ".join(out)

    def to_json(self) -> Dict[str, Any]:
        return {
            "vars": list(VARIABLES),
            "D": self.degree,
            "terms": [{"exp": list(exp), "poly": poly.to_json()} for exp, poly in self.terms],
        }

    @classmethod
    def from_json(cls, field: Field, data: Dict[str, Any]) -> "MultiSeries":
        terms = {tuple(t["exp"]): WordPoly.from_json(field, t["poly"]) for t in data["terms"]}
        return cls(field, terms, data["D"])


def _check_truncation(arg: MonomialArg, degree: int):
    if degree is None or degree < 0:
        raise UsageError(f"degree must be >= 0, but got {degree}")
    if arg.degree < 1:
        raise UsageError(f"generating functions need an argument of positive degree, but got {arg}")


def gen_series(kind: str, arg: MonomialArg, degree: int, field: Field = EXACT) -> MultiSeries:
    """
    Generating function of alternating words, e.g. W^-(arg) = sum_n W_{-n} arg^n.

    :param kind: one of Wminus, Wplus, Gtilde, G
    :param degree: truncation bound on total (t, s)-degree
    """
    _check_truncation(arg, degree)
    terms = {}
    for n in range(degree // arg.degree + 1):
        terms[arg.exponent(n)] = WordPoly.word(field, alternating_word(kind, n), arg.coefficient(field, n))
    return MultiSeries(field, terms, degree)


@lru_cache(maxsize=None)
def delta_n(m: int, n: int, field: Field = EXACT) -> WordPoly:
    """
    Delta^{(m)}_n: sum over Catalan words of length 2n, each weighted by
    prod_i [abar_1 + ... + abar_{i-1} + m(abar_i + 1)/2]_q.
    """
    terms = {}
    for w in catalan_words(n):
        coeff, prefix = field.one(), 0
        for letter in w:
            b = bar(letter)
            index = prefix + (m if b == 1 else 0)
            if index == 0:
                coeff = None
                break
            coeff = coeff * field.qint(index)
            prefix += b
        if coeff is not None:
            terms[w] = coeff
    logger.debug("built Delta^(%d)_%d with %d words", m, n, len(terms))
    return WordPoly(field, terms)


def delta_series(m: int, arg: MonomialArg, degree: int, field: Field = EXACT) -> MultiSeries:
    """Delta^{(m)}(arg) truncated at total degree ``degree``."""
    _check_truncation(arg, degree)
    terms = {}
    for n in range(degree // arg.degree + 1):
        terms[arg.exponent(n)] = delta_n(m, n, field).scale(arg.coefficient(field, n))
    return MultiSeries(field, terms, degree)


def tdelta_series(m: int, arg: MonomialArg, degree: int, field: Field = EXACT) -> MultiSeries:
    """Delta~^{(m)}(arg): the letter swap x <-> y applied to every coefficient of Delta^{(m)}(arg)."""
    return delta_series(m, arg, degree, field).swap_map()


def laurent_c(field: Field, arg: MonomialArg) -> MultiSeries:
    """c(arg) = arg - arg^{-1} as an exact Laurent polynomial."""
    plus = MultiSeries.monomial(field, arg.exponent(1), WordPoly(field, {"": arg.coefficient(field, 1)}))
    minus = MultiSeries.monomial(field, arg.exponent(-1), WordPoly(field, {"": arg.coefficient(field, -1)}))
    return plus - minus


def scalar_c(field: Field, vpow: int) -> Any:
    """c(v^vpow) as a plain scalar."""
    return field.vpow(vpow) - field.vpow(-vpow)
