"""
Builders for the fusion matrices E, F, H, the R- and Ř-matrices, the K-matrix
(three constructions) and the gauge matrices D, K̄.

All builders take a coefficient ``field`` last and are memoized; the
returned matrices are immutable.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Optional, Union

from .errors import QShuffleError, UsageError
from .matrix import LegSpec, Mat, kron, leg_embed
from .scalar import EXACT, Field
from .series import MonomialArg, MultiSeries, S, T, delta_series, gen_series, laurent_c, scalar_c, tdelta_series
from .words import WordPoly

logger = logging.getLogger(__name__)

K_METHODS = ("closed", "alt", "fused")
MINUS_T2 = MonomialArg(0, (2, 0), -1)


@dataclass(frozen=True, order=True)
class Spin:
    """
    A spin j in (1/2)N+, stored as the positive integer 2j.
    """

    twice: int

    def __post_init__(self):
        if isinstance(self.twice, bool) or not isinstance(self.twice, int) or self.twice < 1:
            raise UsageError(f"spin must be a positive half-integer, but got 2j = {self.twice}")

    @classmethod
    def parse(cls, value: Union["Spin", str, int, Fraction]) -> "Spin":
        """Accept a Spin, a string such as "1/2" or "3/2", an int or a Fraction."""
        if isinstance(value, Spin):
            return value
        try:
            frac = value if isinstance(value, Fraction) else Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse spin {value!r}, expected '1/2', '1', '3/2', ...") from None
        twice = 2 * frac
        if twice.denominator != 1:
            raise UsageError(f"spin must be a multiple of 1/2, but got {value!r}")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def dim(self) -> int:
        return self.twice + 1

    def __str__(self):
        return str(self.value)


HALF = Spin(1)


def _arg_for(var: str) -> MonomialArg:
    if var == "t":
        return T
    if var == "s":
        return S
    raise UsageError(f"var must be 't' or 's', but got {var}")


# -- fusion matrices ---------------------------------------------------------

@lru_cache(maxsize=None)
def build_E(j, field: Field = EXACT) -> Mat:
    """E^{(j+1/2)}, a (4j+2) x (2j+2) matrix; ``j`` is the spin below the fused one."""
    n = Spin.parse(j).twice
    values = {}
    for a in range(1, n + 2):
        values[(a, a)] = field.sqrt_brackets((n + 2 - a, n + 1)) / field.qint(n + 1)
        values[(a + n + 1, a + 1)] = field.sqrt_brackets((a, n + 1)) / field.qint(n + 1)
    return Mat.from_sparse(field, 2 * n + 2, n + 2, values)


@lru_cache(maxsize=None)
def build_F(j, field: Field = EXACT) -> Mat:
    """F^{(j+1/2)}, a (2j+2) x (4j+2) matrix with F E = I."""
    n = Spin.parse(j).twice
    values = {}
    for a in range(1, n + 2):
        values[(a, a)] = field.sqrt_brackets((n + 2 - a, n + 1)) / (field.qint(n + 2 - a) + field.qint(a - 1))
        values[(a + 1, a + n + 1)] = field.sqrt_brackets((a, n + 1)) / (field.qint(n + 1 - a) + field.qint(a))
    return Mat.from_sparse(field, n + 2, 2 * n + 2, values)


@lru_cache(maxsize=None)
def build_H(j, field: Field = EXACT) -> Mat:
    """H^{(j+1/2)} = diag(c(q) c(q^2) ... c(q^{2j}) ([2j+2-a]_q + [a-1]_q))."""
    n = Spin.parse(j).twice
    prefactor = reduce(lambda acc, i: acc * scalar_c(field, 2 * i), range(1, n + 1), field.one())
    return Mat.diag(field, [prefactor * (field.qint(n + 2 - a) + field.qint(a - 1)) for a in range(1, n + 3)])


# -- R and Ř -----------------------------------------------------------------

def _r_half_half(arg: MonomialArg, field: Field) -> Mat:
    c_qt = laurent_c(field, arg.times_v(2))
    c_t = laurent_c(field, arg)
    c_q = scalar_c(field, 2)
    z = field.zero()
    return Mat(field, [[c_qt, z, z, z],
                       [z, c_t, c_q, z],
                       [z, c_q, c_t, z],
                       [z, z, z, c_qt]])


@lru_cache(maxsize=None)
def build_R(j1, j2, arg: MonomialArg = T, field: Field = EXACT) -> Mat:
    """
    R^{(j1,j2)}(arg), built by fusion from R^{(1/2,1/2)}.

    j1 is reduced to 1/2 first (fusing on the first space), then j2.
    """
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    if j1 == HALF and j2 == HALF:
        return _r_half_half(arg, field)
    logger.debug("fusing R^(%s,%s)(%s) over the %s field", j1, j2, arg, field.name)
    if j1.twice > 1:
        return fused_R(Spin(j1.twice - 1), j2, 1, arg, field)
    return fused_R(HALF, Spin(j2.twice - 1), 4, arg, field)


def fused_R(j1, j2, variant: int, arg: MonomialArg = T, field: Field = EXACT) -> Mat:
    """
    One of the four fusion recursions for the R-matrix.

    Variants 1 and 2 give R^{(j1+1/2, j2)}(arg), variants 3 and 4 give R^{(j1, j2+1/2)}(arg).
    """
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    if variant in (1, 2):
        dims = (2, j1.dim, j2.dim)
        f = leg_embed(build_F(j1, field), LegSpec(dims, (1, 2)))
        e = leg_embed(build_E(j1, field), LegSpec(dims, (1, 2)))
        if variant == 1:
            r13 = build_R(HALF, j2, arg.times_v(-j1.twice), field)
            r23 = build_R(j1, j2, arg.times_v(1), field)
        else:
            r13 = build_R(HALF, j2, arg.times_v(j1.twice), field)
            r23 = build_R(j1, j2, arg.times_v(-1), field)
        r13 = leg_embed(r13, LegSpec(dims, (1, 3)))
        r23 = leg_embed(r23, LegSpec(dims, (2, 3)))
        middle = r13 @ r23 if variant == 1 else r23 @ r13
        return f @ middle @ e
    if variant in (3, 4):
        dims = (j1.dim, 2, j2.dim)
        f = leg_embed(build_F(j2, field), LegSpec(dims, (2, 3)))
        e = leg_embed(build_E(j2, field), LegSpec(dims, (2, 3)))
        if variant == 3:
            r12 = build_R(j1, HALF, arg.times_v(-j2.twice), field)
            r13 = build_R(j1, j2, arg.times_v(1), field)
        else:
            r12 = build_R(j1, HALF, arg.times_v(j2.twice), field)
            r13 = build_R(j1, j2, arg.times_v(-1), field)
        r12 = leg_embed(r12, LegSpec(dims, (1, 2)))
        r13 = leg_embed(r13, LegSpec(dims, (1, 3)))
        middle = r12 @ r13 if variant == 3 else r13 @ r12
        return f @ middle @ e
    raise UsageError(f"variant must be 1, 2, 3 or 4, but got {variant}")


@lru_cache(maxsize=None)
def build_R_half_closed(j, arg: MonomialArg = T, field: Field = EXACT) -> Mat:
    """Closed form of R^{(1/2,j)}(arg): c-factors on the diagonal and a (2j)-offset band."""
    n = Spin.parse(j).twice
    product = MultiSeries.constant(field, field.one())
    for k in range(n - 1):
        product = product.shuffle_mul(laurent_c(field, arg.times_v(n - 1 - 2 * k)))
    values = {}
    for a in range(1, n + 2):
        diagonal = laurent_c(field, arg.times_v(n + 3 - 2 * a)).shuffle_mul(product)
        values[(a, a)] = diagonal
        values[(2 * n + 3 - a, 2 * n + 3 - a)] = diagonal
    for a in range(2, n + 2):
        off = product.scale(scalar_c(field, 2) * field.sqrt_brackets((n + 2 - a, a - 1)))
        values[(a, a + n)] = off
        values[(a + n, a)] = off
    return Mat.from_sparse(field, 2 * n + 2, 2 * n + 2, values)


@lru_cache(maxsize=None)
def build_Rhat(j1, j2, field: Field = EXACT) -> Mat:
    """Ř^{(j1,j2)} = q^{2 diag(j1,...,-j1) (x) diag(j2,...,-j2)}."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    values = []
    for i1 in range(j1.dim):
        for i2 in range(j2.dim):
            # q^{2 m1 m2} = v^{(2 m1)(2 m2)}
            values.append(field.vpow((j1.twice - 2 * i1) * (j2.twice - 2 * i2)))
    return Mat.diag(field, values)


def rhat_block_form(j1, j2, field: Field = EXACT) -> Mat:
    """Ř^{(j1,j2)} assembled as diag(w^{2j1}, w^{2j1-2}, ..., w^{-2j1}), w = diag(q^{j2}, ..., q^{-j2})."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    omega = Mat.diag(field, [field.vpow(j2.twice - 2 * i) for i in range(j2.dim)])
    omega_inv = Mat.diag(field, [field.vpow(2 * i - j2.twice) for i in range(j2.dim)])
    out = Mat.zeros(field, j1.dim * j2.dim, j1.dim * j2.dim)
    for b in range(j1.dim):
        power = j1.twice - 2 * b
        block = Mat.identity(field, j2.dim)
        for _ in range(abs(power)):
            block = block @ (omega if power > 0 else omega_inv)
        selector = Mat.from_sparse(field, j1.dim, j1.dim, {(b + 1, b + 1): field.one()})
        out = out + kron(selector, block)
    return out


def fused_Rhat(j1, j2, variant: int, field: Field = EXACT) -> Mat:
    """The four fusion recursions for Ř, numbered as for :func:`fused_R`."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    if variant in (1, 2):
        dims = (2, j1.dim, j2.dim)
        f = leg_embed(build_F(j1, field), LegSpec(dims, (1, 2)))
        e = leg_embed(build_E(j1, field), LegSpec(dims, (1, 2)))
        r13 = leg_embed(build_Rhat(HALF, j2, field), LegSpec(dims, (1, 3)))
        r23 = leg_embed(build_Rhat(j1, j2, field), LegSpec(dims, (2, 3)))
        return f @ (r13 @ r23 if variant == 1 else r23 @ r13) @ e
    if variant in (3, 4):
        dims = (j1.dim, 2, j2.dim)
        f = leg_embed(build_F(j2, field), LegSpec(dims, (2, 3)))
        e = leg_embed(build_E(j2, field), LegSpec(dims, (2, 3)))
        r12 = leg_embed(build_Rhat(j1, HALF, field), LegSpec(dims, (1, 2)))
        r13 = leg_embed(build_Rhat(j1, j2, field), LegSpec(dims, (1, 3)))
        return f @ (r12 @ r13 if variant == 3 else r13 @ r12) @ e
    raise UsageError(f"variant must be 1, 2, 3 or 4, but got {variant}")


# -- K -----------------------------------------------------------------------

@dataclass(frozen=True)
class PhiCoeffs:
    """Prefactors of the closed (phi) and alternative (psi) K entries; rho is the exponent of q."""

    phi: Any
    psi: Any
    rho: Fraction


def rho(a: int, b: int, j) -> Fraction:
    """
    Exponent of q in phi and psi.

    Half-integral for integer j and a + b even, so callers use v^{2 rho}.
    """
    jv = Spin.parse(j).value
    value = Fraction(a * a + b * b + 4 * a * b - 6 * a - 6 * b + 6, 2) \
        + (6 * jv * jv - 6 * a * jv - 6 * b * jv + 13 * jv) / 2
    if (2 * value).denominator != 1:
        raise QShuffleError(f"2*rho({a},{b},{jv}) = {2 * value} is not an integer")
    return value


def _factorial_brackets(n: int):
    return range(1, n + 1)


@lru_cache(maxsize=None)
def phi_coeffs(a: int, b: int, j, field: Field = EXACT) -> PhiCoeffs:
    n = Spin.parse(j).twice
    r = rho(a, b, j)
    lead = field.vpow(int(2 * r)) / field.qfact(n)
    upper = [*_factorial_brackets(a - 1), *_factorial_brackets(n + 1 - b)]
    lower = [*_factorial_brackets(b - 1), *_factorial_brackets(n + 1 - a)]
    phi = lead * field.sqrt_brackets(upper, lower)
    psi = lead * field.sqrt_brackets(lower, upper)
    return PhiCoeffs(phi, psi, r)


def _times_arg(series: MultiSeries, arg: MonomialArg, field: Field) -> MultiSeries:
    return series.shift(arg.exponent(1)).scale(arg.coefficient(field, 1))


@lru_cache(maxsize=None)
def build_K_half(degree: int, field: Field = EXACT) -> Mat:
    """K^{(1/2)}(t) = [[q t W^-(t^2), G(t^2)], [G~(t^2), q t W^+(t^2)]] truncated at ``degree``."""
    if degree < 0:
        raise UsageError(f"degree must be >= 0, but got {degree}")
    t2 = T.power(2)
    q = field.vpow(2)

    def odd(kind):
        if degree < 1:
            return MultiSeries(field, degree=degree)
        return _times_arg(gen_series(kind, t2, degree - 1, field), T, field).scale(q)

    return Mat(field, [[odd("Wminus"), gen_series("G", t2, degree, field)],
                       [gen_series("Gtilde", t2, degree, field), odd("Wplus")]])


def _closed_entry(a: int, b: int, n: int, degree: int, field: Field) -> MultiSeries:
    extra = n + b - a
    delta = delta_series(-n, MINUS_T2, degree + extra, field)
    entry = delta.letter_power("left", "x", 1 - b).letter_power("right", "y", a - n - 1)
    entry = entry.shift((a - b - n, 0, 0)).truncate(degree)
    return entry.scale(phi_coeffs(a, b, Spin(n), field).phi)


def _alt_entry(a: int, b: int, n: int, degree: int, field: Field) -> MultiSeries:
    extra = n + a - b
    delta = tdelta_series(-n, MINUS_T2, degree + extra, field)
    entry = delta.letter_power("left", "y", b - n - 1).letter_power("right", "x", 1 - a)
    entry = entry.shift((b - a - n, 0, 0)).truncate(degree)
    return entry.scale(phi_coeffs(a, b, Spin(n), field).psi)


def _build_K_fused(j: Spin, degree: int, field: Field) -> Mat:
    if j == HALF:
        return build_K_half(degree, field)
    below = Spin(j.twice - 1)
    k1 = kron(build_K(HALF, degree, method="fused", field=field, arg=T.times_v(below.twice)),
              Mat.identity(field, below.dim))
    k2 = kron(Mat.identity(field, 2),
              build_K(below, degree, method="fused", field=field, arg=T.times_v(-1)))
    return build_F(below, field) @ k1 @ build_Rhat(HALF, below, field) @ k2 @ build_E(below, field)


@lru_cache(maxsize=None)
def _build_K_t(j: Spin, degree: int, method: str, field: Field) -> Mat:
    logger.debug("building K^(%s) by the %s construction at degree %d", j, method, degree)
    n = j.twice
    if method == "closed":
        out = Mat.from_function(field, n + 1, n + 1, lambda a, b: _closed_entry(a, b, n, degree, field))
    elif method == "alt":
        out = Mat.from_function(field, n + 1, n + 1, lambda a, b: _alt_entry(a, b, n, degree, field))
    else:
        out = _build_K_fused(j, degree, field)
    for _, _, entry in out.nonzero():
        entry.check_grading()
    return out


def build_K(j, degree: int, var: str = "t", method: str = "closed", field: Field = EXACT,
            arg: Optional[MonomialArg] = None) -> Mat:
    """
    K^{(j)}(var) truncated at total degree ``degree``.

    :param method: "closed" (Delta with erasures), "alt" (Delta~ with erasures) or
        "fused" (recursion from K^{(1/2)} through E, F and Ř)
    :param arg: a degree-1 argument such as q^{j} t; overrides ``var``
    :raise qshuffle.UsageError: on an unknown method, variable or a negative degree.
    """
    j = Spin.parse(j)
    if method not in K_METHODS:
        raise UsageError(f"method must be one of {K_METHODS}, but got {method}")
    if degree is None or degree < 0:
        raise UsageError(f"degree must be >= 0, but got {degree}")
    arg = _arg_for(var) if arg is None else arg
    if arg.degree != 1:
        raise UsageError(f"K-matrix arguments must have degree 1, but got {arg}")
    base = _build_K_t(j, degree, method, field)
    return base if arg == T else base.substitute(arg)


def k_entry(k: Mat, a: int, b: int) -> MultiSeries:
    """Entry (a, b) of a K-matrix; indices outside the matrix give the zero series."""
    if 1 <= a <= k.rows and 1 <= b <= k.cols:
        entry = k[a, b]
        return entry if isinstance(entry, MultiSeries) else MultiSeries.constant(k.field, entry)
    return MultiSeries(k.field)


def krecur_entry(j, a: int, b: int, degree: int, field: Field = EXACT) -> MultiSeries:
    """
    Entry (a, b) of K^{(j+1/2)}(t) written out from the fusion recursion: four
    K^{(1/2)}(q^j t) * K^{(j)}(q^{-1/2} t) terms, some of which index outside
    K^{(j)} and vanish.
    """
    j = Spin.parse(j)
    n = j.twice
    half = build_K(HALF, degree, field=field, arg=T.times_v(n))
    lower = build_K(j, degree, field=field, arg=T.times_v(-1))
    denominator = field.qint(n + 2 - a) + field.qint(a - 1)
    terms = [
        (n + 2 - 2 * a, (n + 2 - a, n + 2 - b), (1, 1), (a, b)),
        (2 * a - n - 2, (n + 2 - a, b - 1), (1, 2), (a, b - 1)),
        (n + 4 - 2 * a, (a - 1, n + 2 - b), (2, 1), (a - 1, b)),
        (2 * a - n - 4, (a - 1, b - 1), (2, 2), (a - 1, b - 1)),
    ]
    total = MultiSeries(field, degree=degree)
    for vpow, radicands, half_index, lower_index in terms:
        coeff = field.vpow(vpow) * field.sqrt_brackets(radicands) / denominator
        if not coeff:
            continue
        product = k_entry(half, *half_index).shuffle_mul(k_entry(lower, *lower_index))
        total = total + product.scale(coeff)
    return total


# -- gauge -------------------------------------------------------------------

@lru_cache(maxsize=None)
def build_D(j, field: Field = EXACT, inverse: bool = False) -> Mat:
    """D^{(j)} = diag(1, k, ..., k^{2j}) (or its inverse) with k a formal variable."""
    j = Spin.parse(j)
    sign = -1 if inverse else 1
    return Mat.diag(field, [MultiSeries.monomial(field, (0, 0, sign * i), WordPoly.unit(field))
                            for i in range(j.dim)])


def build_Kbar(j, degree: int, var: str = "t", method: str = "closed", field: Field = EXACT) -> Mat:
    """K̄^{(j)} = D^{-1} K D: entry (a, b) carries k^{b-a}."""
    k = build_K(j, degree, var=var, method=method, field=field)
    return k.map_indexed(lambda a, b, e: e.shift((0, 0, b - a)) if isinstance(e, MultiSeries) else e)
