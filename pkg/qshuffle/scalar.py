"""
Coefficient fields.

Exact coefficients live in Q(v), v = q^{1/2}, extended by square roots of
q-integers. A :class:`Scalar` is a finite map from a radical signature (the
sorted tuple of bracket indices n whose sqrt([n]_q) appears to the first power)
to a sympy rational function in v.

:class:`NumericField` runs the same builders over floats at a sample q.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.fields import field as fraction_field

from .errors import RadicalError, UsageError

logger = logging.getLogger(__name__)

RATIONAL_FUNCTIONS, V = fraction_field("v", QQ)
RatFun = type(V)
RadicalSignature = Tuple[int, ...]

LaurentItems = Tuple[Tuple[int, int], ...]


@lru_cache(maxsize=None)
def bracket(n: int) -> RatFun:
    """[n]_q as an element of Q(v)."""
    if n < 0:
        return -bracket(-n)
    return sum((V ** (2 * (n - 1 - 2 * k)) for k in range(n)), RATIONAL_FUNCTIONS.zero)


@lru_cache(maxsize=None)
def _merge(s1: RadicalSignature, s2: RadicalSignature) -> Tuple[RadicalSignature, RatFun]:
    shared = set(s1) & set(s2)
    signature = tuple(sorted(set(s1) ^ set(s2)))
    extra = reduce(lambda acc, n: acc * bracket(n), sorted(shared), RATIONAL_FUNCTIONS.one)
    return signature, extra


class Scalar:
    """
    Element of Q(v)[sqrt([2]_q), sqrt([3]_q), ...].

    Immutable. Zero rational parts are never stored, so the empty map is zero.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Dict[RadicalSignature, RatFun], None] = None):
        self._terms = {tuple(sig): r for sig, r in (terms or {}).items() if r}

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({(): RATIONAL_FUNCTIONS.one})

    @classmethod
    def from_ratfun(cls, r: RatFun, signature: RadicalSignature = ()) -> "Scalar":
        return cls({tuple(signature): r})

    @classmethod
    def from_int(cls, n: int) -> "Scalar":
        return cls({(): RATIONAL_FUNCTIONS(n)})

    @property
    def terms(self) -> List[Tuple[RadicalSignature, RatFun]]:
        return sorted(self._terms.items())

    def is_rational(self) -> bool:
        return all(sig == () for sig in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        terms = dict(self._terms)
        for sig, r in other._terms.items():
            current = terms.get(sig)
            terms[sig] = r if current is None else current + r
        return Scalar(terms)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({sig: -r for sig, r in self._terms.items()})

    def __sub__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: Dict[RadicalSignature, RatFun] = {}
        for s1, r1 in self._terms.items():
            for s2, r2 in other._terms.items():
                if s1 or s2:
                    sig, extra = _merge(s1, s2)
                    product = r1 * r2 * extra
                else:
                    sig, product = (), r1 * r2
                current = terms.get(sig)
                terms[sig] = product if current is None else current + product
        return Scalar(terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._terms) != 1:
            raise RadicalError(f"division only by single-term scalars, but got {other!r}")
        (sig, r), = other._terms.items()
        # 1/(r sqrt(S)) = sqrt(S) / (r prod S)
        denominator = reduce(lambda acc, n: acc * bracket(n), sig, r)
        return self * Scalar({sig: RATIONAL_FUNCTIONS.one / denominator})

    def __rtruediv__(self, other: Any) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return Scalar.one() / (self ** -n)
        result = Scalar.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: Any) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return not (self - other)

    __hash__ = None

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for sig, r in self.terms:
            radical = "".join(f"*sqrt([{n}])" for n in sig)
            parts.append(f"({r.as_expr()}){radical}")
        return " + ".join(parts)

    def to_json(self) -> List[Dict[str, Any]]:
        out = []
        for sig, r in self.terms:
            num, den = ratfun_parts(r)
            out.append({"radical": list(sig), "num": num, "den": den})
        return out

    @classmethod
    def from_json(cls, data: Sequence[Dict[str, Any]]) -> "Scalar":
        terms = {}
        for term in data:
            numerator = _laurent_from_pairs(term["num"])
            denominator = _laurent_from_pairs(term["den"])
            terms[tuple(term["radical"])] = numerator / denominator
        return cls(terms)


def _coerce(value: Any) -> Union[Scalar, Any]:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, int):
        return Scalar.from_int(value)
    if isinstance(value, RatFun):
        return Scalar.from_ratfun(value)
    return NotImplemented


def _laurent_terms(poly) -> Dict[int, Fraction]:
    return {monom[0]: Fraction(int(c.numerator), int(c.denominator)) for monom, c in poly.terms()}


def _laurent_from_pairs(pairs: Iterable[Sequence[int]]) -> RatFun:
    return sum((int(c) * V ** int(e) for c, e in pairs), RATIONAL_FUNCTIONS.zero)


def ratfun_parts(r: RatFun) -> Tuple[List[List[int]], List[List[int]]]:
    """
    Canonical integer Laurent numerator and denominator of a rational function.

    The pair has coprime integer content, the denominator has a positive
    leading coefficient and minimal v-exponent zero. Pairs are [coefficient, exponent],
    exponents descending.
    """
    num = _laurent_terms(r.numer)
    den = _laurent_terms(r.denom)
    scale = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in [*num.values(), *den.values()]), 1)
    num_int = {e: int(c * scale) for e, c in num.items()}
    den_int = {e: int(c * scale) for e, c in den.items()}
    content = reduce(math.gcd, [abs(c) for c in [*num_int.values(), *den_int.values()]], 0) or 1
    sign = 1 if den_int[max(den_int)] > 0 else -1
    shift = min(den_int)
    num_pairs = [[sign * c // content, e - shift] for e, c in sorted(num_int.items(), reverse=True)]
    den_pairs = [[sign * c // content, e - shift] for e, c in sorted(den_int.items(), reverse=True)]
    return num_pairs, den_pairs


def eval_ratfun(r: RatFun, v: float) -> float:
    def _value(poly):
        return sum(int(c.numerator) / int(c.denominator) * v ** monom[0] for monom, c in poly.terms())
    return _value(r.numer) / _value(r.denom)


def qint(n: int) -> Scalar:
    """
    The q-integer [n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}.

    :param n: any integer; [-n]_q = -[n]_q
    """
    return Scalar.from_ratfun(bracket(n))


def qfact(n: int) -> Scalar:
    """The q-factorial [n]_q [n-1]_q ... [1]_q, with [0]_q^! = 1."""
    if n < 0:
        raise UsageError(f"q-factorial needs n >= 0, but got {n}")
    return Scalar.from_ratfun(_rational_qfact(n))


@lru_cache(maxsize=None)
def _rational_qfact(n: int) -> RatFun:
    return reduce(lambda acc, k: acc * bracket(k), range(1, n + 1), RATIONAL_FUNCTIONS.one)


def sqrt_brackets(indices: Iterable[int], inverse: Iterable[int] = ()) -> Scalar:
    """
    prod sqrt([n]_q) over ``indices`` divided by prod sqrt([d]_q) over ``inverse``.

    Paired indices are moved into the rational part; sqrt(1/[d]) is written as
    sqrt([d])/[d] so the signature only ever records numerator radicals.

    :raise qshuffle.RadicalError: if an index is negative, or an inverse index is zero.
    """
    rational = RATIONAL_FUNCTIONS.one
    odd = set()

    def toggle(n):
        nonlocal rational
        if n in odd:
            odd.remove(n)
            rational = rational * bracket(n)
        else:
            odd.add(n)

    for n in indices:
        if n < 0:
            raise RadicalError(f"sqrt([{n}]_q) is not a square root of a positive bracket")
        if n == 0:
            return Scalar.zero()
        if n > 1:
            toggle(n)
    for d in inverse:
        if d <= 0:
            raise RadicalError(f"cannot divide by sqrt([{d}]_q)")
        if d > 1:
            rational = rational / bracket(d)
            toggle(d)
    return Scalar.from_ratfun(rational, tuple(sorted(odd)))


def numeric_bracket(n: int, q_value: float) -> float:
    if n < 0:
        return -numeric_bracket(-n, q_value)
    return sum(q_value ** (n - 1 - 2 * k) for k in range(n))


def eval_numeric(x: Scalar, q_value: float) -> float:
    """
    Evaluate an exact scalar at a real q > 1, radicals as positive square roots.

    :raise ZeroDivisionError: if a denominator vanishes at q_value.
    """
    if q_value <= 1:
        raise UsageError(f"q_value must be > 1, but got {q_value}")
    v = math.sqrt(q_value)
    total = 0.0
    for sig, r in x.terms:
        radical = math.prod(math.sqrt(numeric_bracket(n, q_value)) for n in sig)
        total += eval_ratfun(r, v) * radical
    return total


@dataclass(frozen=True)
class ExactField:
    """Exact coefficients: :class:`Scalar`."""

    name: str = "exact"

    def zero(self) -> Scalar:
        return Scalar.zero()

    def one(self) -> Scalar:
        return Scalar.one()

    def from_int(self, n: int) -> Scalar:
        return Scalar.from_int(n)

    def vpow(self, k: int) -> Scalar:
        return _exact_vpow(k)

    def qint(self, n: int) -> Scalar:
        return qint(n)

    def qfact(self, n: int) -> Scalar:
        return qfact(n)

    def sqrt_brackets(self, indices: Iterable[int], inverse: Iterable[int] = ()) -> Scalar:
        return sqrt_brackets(indices, inverse)

    def laurent_q(self, items: LaurentItems) -> Scalar:
        return _exact_laurent_q(items)

    def to_float(self, x: Scalar, q_value: float) -> float:
        return eval_numeric(x, q_value)

    def coeff_to_json(self, x: Scalar) -> Any:
        return x.to_json()

    def coeff_from_json(self, data: Any) -> Scalar:
        return Scalar.from_json(data)


@lru_cache(maxsize=None)
def _exact_vpow(k: int) -> Scalar:
    return Scalar.from_ratfun(V ** k)


@lru_cache(maxsize=None)
def _exact_laurent_q(items: LaurentItems) -> Scalar:
    return Scalar.from_ratfun(sum((c * V ** (2 * e) for e, c in items), RATIONAL_FUNCTIONS.zero))


@dataclass(frozen=True)
class NumericField:
    """
    Floating point coefficients at a fixed sample q > 1.

    :param q: the sample value of q; v = sqrt(q)
    """

    q: float
    name: str = "numeric"

    def __post_init__(self):
        if not self.q > 1:
            raise UsageError(f"numeric backend needs q > 1, but got {self.q}")

    @property
    def v(self) -> float:
        return math.sqrt(self.q)

    def zero(self) -> float:
        return 0.0

    def one(self) -> float:
        return 1.0

    def from_int(self, n: int) -> float:
        return float(n)

    def vpow(self, k: int) -> float:
        return self.v ** k

    def qint(self, n: int) -> float:
        return numeric_bracket(n, self.q)

    def qfact(self, n: int) -> float:
        if n < 0:
            raise UsageError(f"q-factorial needs n >= 0, but got {n}")
        return math.prod(self.qint(k) for k in range(1, n + 1))

    def sqrt_brackets(self, indices: Iterable[int], inverse: Iterable[int] = ()) -> float:
        value = 1.0
        for n in indices:
            if n < 0:
                raise RadicalError(f"sqrt([{n}]_q) is not a square root of a positive bracket")
            value *= math.sqrt(self.qint(n))
        for d in inverse:
            if d <= 0:
                raise RadicalError(f"cannot divide by sqrt([{d}]_q)")
            value /= math.sqrt(self.qint(d))
        return value

    def laurent_q(self, items: LaurentItems) -> float:
        return sum(c * self.q ** e for e, c in items)

    def to_float(self, x: float, q_value: float = None) -> float:
        return float(x)

    def coeff_to_json(self, x: float) -> float:
        return x

    def coeff_from_json(self, data: Any) -> float:
        return float(data)


EXACT = ExactField()
Field = Union[ExactField, NumericField]
