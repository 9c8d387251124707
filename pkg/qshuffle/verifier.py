"""
Identity checks over the constructors.

Each ``check_*`` function builds both sides of one or more displayed matrix
identities and returns a :class:`Report`; a failing identity is a report with
a witness, never an exception. The exact backend compares entries exactly, the
numeric backend compares floats at each sample q against a tolerance.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import catalan

from .check_config import CHECK_NAMES, CheckSpec
from .constructors import (
    HALF, Spin, build_D, build_E, build_F, build_H, build_K, build_K_half, build_Kbar, build_R,
    build_R_half_closed, build_Rhat, fused_R, fused_Rhat, krecur_entry, rhat_block_form,
)
from .errors import QShuffleError, UsageError
from .matrix import LegSpec, Mat, kron, leg_embed, mat_equal, mat_residual
from .scalar import EXACT, ExactField, Field, NumericField
from .series import MonomialArg, MultiSeries, S, T, delta_n, delta_series, gen_series, tdelta_series
from .words import WordPoly, catalan_words, is_catalan

logger = logging.getLogger(__name__)

DEFAULT_Q = (1.3, 1.7)
DEFAULT_TOL = 1e-8

T_OVER_S = MonomialArg(0, (1, -1))
S_OVER_T = MonomialArg(0, (-1, 1))
TS = MonomialArg(0, (1, 1))
MINUS_T = MonomialArg(0, (1, 0), -1)
MINUS_T2 = MonomialArg(0, (2, 0), -1)

CATALAN_LISTS = {
    0: [""],
    1: ["xy"],
    2: ["xyxy", "xxyy"],
    3: ["xyxyxy", "xxyyxy", "xyxxyy", "xxyxyy", "xxxyyy"],
}


@dataclass
class Report:
    """
    Outcome of one check.

    :param check: check name
    :param params: parameters as JSON values (spins as strings)
    :param passed: True iff every identity held
    :param witness: first failing identity, entry and monomial
    :param millis: wall time
    :param error: message of a usage error that stopped the check
    :param details: extra check output such as the unitarity scalar
    """

    check: str
    params: Dict[str, Any]
    passed: bool
    witness: Optional[Dict[str, Any]] = None
    millis: Optional[float] = None
    error: Optional[str] = None
    details: Optional[Dict[str, Any]] = None

    def to_json(self, timing: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {"check": self.check, "params": self.params, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.error is not None:
            out["error"] = self.error
        if self.details is not None:
            out["details"] = self.details
        if timing and self.millis is not None:
            out["millis"] = round(self.millis, 3)
        return out

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Report":
        return cls(data["check"], data["params"], data["pass"], data.get("witness"),
                   data.get("millis"), data.get("error"), data.get("details"))

    def summary(self, timing: bool = True) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{'PASS' if self.passed else 'FAIL'}  {self.check}  {params}"
        if timing and self.millis is not None:
            line += f"  ({self.millis:.1f} ms)"
        if self.error is not None:
            line += f"\n    error: {self.error}"
        elif self.witness is not None:
            line += f"\n    witness: {self.witness}"
        return line


@dataclass(frozen=True)
class Outcome:
    label: str
    passed: bool
    witness: Optional[Dict[str, Any]] = None


Side = Union[Mat, MultiSeries, WordPoly]
Item = Union[Outcome, Tuple[str, Side, Side]]


def _as_mat(x: Side, field: Field) -> Mat:
    if isinstance(x, Mat):
        return x
    if isinstance(x, WordPoly):
        x = MultiSeries.constant(field, x)
    return Mat(field, [[x]])


class _Context:
    """Per-field comparison state handed to a check body."""

    def __init__(self, field: Field, tol: float, notes: Dict[str, Any]):
        self.field = field
        self.tol = tol
        self.notes = notes
        self.max_residual = 0.0

    @property
    def exact(self) -> bool:
        return isinstance(self.field, ExactField)

    def compare(self, label: str, lhs: Side, rhs: Side) -> Outcome:
        lhs, rhs = _as_mat(lhs, self.field), _as_mat(rhs, self.field)
        if self.exact:
            ok, witness = mat_equal(lhs, rhs)
            return Outcome(label, ok, None if ok else {"identity": label, **witness.to_json()})
        residual, witness = mat_residual(lhs, rhs)
        self.max_residual = max(self.max_residual, residual)
        if residual < self.tol:
            return Outcome(label, True)
        return Outcome(label, False, {"identity": label, "q": self.field.q, "residual": residual,
                                      **witness.to_json()})

    def nonzero(self, label: str, x: Side) -> Outcome:
        """Passes unless ``x`` vanishes; the residual against zero is not recorded."""
        x = _as_mat(x, self.field)
        zero = Mat.zeros(self.field, x.rows, x.cols)
        if self.exact:
            vanished = mat_equal(x, zero)[0]
        else:
            vanished = mat_residual(x, zero)[0] < self.tol
        if not vanished:
            return Outcome(label, True)
        witness = {"identity": label, "rows": x.rows, "cols": x.cols}
        if not self.exact:
            witness["q"] = self.field.q
        return Outcome(label, False, witness)


Body = Callable[[_Context], Iterable[Item]]


def _run(name: str, params: Dict[str, Any], body: Body, backend: str = "exact",
         q_values: Sequence[float] = DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    if backend not in ("exact", "numeric"):
        raise UsageError(f"backend must be exact or numeric, but got {backend}")
    if backend == "numeric":
        if not q_values:
            raise UsageError("numeric backend needs at least one q value")
        params = {**params, "backend": backend, "q_values": [float(q) for q in q_values]}
        fields: List[Field] = [NumericField(float(q)) for q in q_values]
    else:
        fields = [EXACT]
    logger.info("check %s %s started", name, params)
    start = time.perf_counter()
    notes: Dict[str, Any] = {}
    passed, witness = True, None
    for field in fields:
        ctx = _Context(field, tol, notes)
        for item in body(ctx):
            outcome = item if isinstance(item, Outcome) else ctx.compare(*item)
            if not outcome.passed:
                passed = False
                witness = outcome.witness or {"identity": outcome.label}
                break
        if not passed:
            break
        if not ctx.exact:
            notes.setdefault("max_residual", {})[str(field.q)] = ctx.max_residual
    millis = (time.perf_counter() - start) * 1000
    logger.info("check %s %s %s in %.1f ms", name, params, "passed" if passed else "FAILED", millis)
    return Report(name, params, passed, witness, millis, details=notes or None)


def _spin_params(**spins: Spin) -> Dict[str, str]:
    return {k: str(v) for k, v in spins.items()}


def _check_degree(degree: int):
    if not isinstance(degree, int) or degree < 0:
        raise UsageError(f"degree must be a non-negative integer, but got {degree}")


def _legs3(d1: int, d2: int, d3: int):
    dims = (d1, d2, d3)

    def embed(m: Mat, legs: Tuple[int, ...]) -> Mat:
        return leg_embed(m, LegSpec(dims, legs))
    return embed


# -- Freidel-Maillet ----------------------------------------------------------

def _fm_sides(j1: Spin, j2: Spin, degree: int, field: Field, alternative: bool,
              r_matrix: Optional[Mat] = None, k_matrix: Optional[Mat] = None,
              k_builder: Callable[..., Mat] = build_K) -> Tuple[Mat, Mat]:
    if k_matrix is not None:
        if j1 != j2:
            raise UsageError("an injected K-matrix needs j1 == j2")
        k_s, k_t = k_matrix.substitute(S), k_matrix
    else:
        k_s = k_builder(j1, degree, var="s", field=field)
        k_t = k_builder(j2, degree, var="t", field=field)
    k1 = kron(k_s, Mat.identity(field, j2.dim))
    k2 = kron(Mat.identity(field, j1.dim), k_t)
    rhat = build_Rhat(j1, j2, field)
    if not alternative:
        r = r_matrix if r_matrix is not None else build_R(j1, j2, T_OVER_S, field)
        return r @ k1 @ rhat @ k2, k2 @ rhat @ k1 @ r
    r = r_matrix if r_matrix is not None else build_R(j1, j2, S_OVER_T, field)
    return k1 @ rhat @ k2 @ r, r @ k2 @ rhat @ k1


def check_fm(j1, j2, degree: int, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL,
             r_matrix: Optional[Mat] = None, k_matrix: Optional[Mat] = None) -> Report:
    """
    R(t/s) K_1(s) Ř K_2(t) = K_2(t) Ř K_1(s) R(t/s), all monomials of total degree <= ``degree``.

    :param r_matrix: replacement for R^{(j1,j2)}(t/s), for mutation testing
    :param k_matrix: replacement for K^{(j)}(t) when j1 == j2; K(s) is obtained by substitution
    """
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    _check_degree(degree)

    def body(ctx):
        yield ("RKRK", *_fm_sides(j1, j2, degree, ctx.field, False, r_matrix, k_matrix))
    return _run("fm", {**_spin_params(j1=j1, j2=j2), "degree": degree}, body, backend, q_values, tol)


def check_fm_alt(j1, j2, degree: int, backend: str = "exact", q_values=DEFAULT_Q,
                 tol: float = DEFAULT_TOL) -> Report:
    """K_1(s) Ř K_2(t) R(s/t) = R(s/t) K_2(t) Ř K_1(s)."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    _check_degree(degree)

    def body(ctx):
        yield ("KRKR", *_fm_sides(j1, j2, degree, ctx.field, True))
    return _run("fm_alt", {**_spin_params(j1=j1, j2=j2), "degree": degree}, body, backend, q_values, tol)


# -- R and Ř --------------------------------------------------------------------

def check_ybe(j1, j2, j3, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """
    The three Yang-Baxter equations with t = t1/t2 and s = t2/t3 as
    independent variables, so t1/t3 = ts.
    """
    j1, j2, j3 = Spin.parse(j1), Spin.parse(j2), Spin.parse(j3)

    def body(ctx):
        f = ctx.field
        embed = _legs3(j1.dim, j2.dim, j3.dim)

        def r12(arg):
            return embed(build_R(j1, j2, arg, f), (1, 2))

        def r13(arg):
            return embed(build_R(j1, j3, arg, f), (1, 3))

        def r23(arg):
            return embed(build_R(j2, j3, arg, f), (2, 3))

        yield "RRR1", r12(T) @ r13(TS) @ r23(S), r23(S) @ r13(TS) @ r12(T)
        yield "RRR2", r13(TS) @ r23(S) @ r12(T.inverse()), r12(T.inverse()) @ r23(S) @ r13(TS)
        yield "RRR3", r23(S.inverse()) @ r12(T) @ r13(TS), r13(TS) @ r12(T) @ r23(S.inverse())
    return _run("ybe", _spin_params(j1=j1, j2=j2, j3=j3), body, backend, q_values, tol)


def check_mixed(j1, j2, j3, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """The six identities pairing one R(t) with two Ř's in three-fold tensor space."""
    j1, j2, j3 = Spin.parse(j1), Spin.parse(j2), Spin.parse(j3)

    def body(ctx):
        f = ctx.field
        embed = _legs3(j1.dim, j2.dim, j3.dim)
        r12 = embed(build_R(j1, j2, T, f), (1, 2))
        r13 = embed(build_R(j1, j3, T, f), (1, 3))
        r23 = embed(build_R(j2, j3, T, f), (2, 3))
        h12 = embed(build_Rhat(j1, j2, f), (1, 2))
        h13 = embed(build_Rhat(j1, j3, f), (1, 3))
        h23 = embed(build_Rhat(j2, j3, f), (2, 3))
        yield "hRhRR4", r12 @ h13 @ h23, h23 @ h13 @ r12
        yield "hRhRR6", r13 @ h23 @ h12, h12 @ h23 @ r13
        yield "hRhRR2", r23 @ h12 @ h13, h13 @ h12 @ r23
        yield "hRhRR1", r12 @ h23 @ h13, h13 @ h23 @ r12
        yield "hRhRR3", r13 @ h12 @ h23, h23 @ h12 @ r13
        yield "hRhRR5", r23 @ h13 @ h12, h12 @ h13 @ r23
    return _run("mixed", _spin_params(j1=j1, j2=j2, j3=j3), body, backend, q_values, tol)


def check_EF_suite(j, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """FE, EHF, RE, FR and EFR with R^{(1/2,j)} evaluated at t = q^{j+1/2}."""
    j = Spin.parse(j)

    def body(ctx):
        f = ctx.field
        e, fm, h = build_E(j, f), build_F(j, f), build_H(j, f)
        point = MonomialArg(j.twice + 1, (0, 0))
        r = build_R(HALF, j, point, f)
        yield "FE", fm @ e, Mat.identity(f, j.twice + 2)
        yield "EHF", r, e @ h @ fm
        yield "RE", r @ e, e @ h
        yield "FR", fm @ r, h @ fm
        yield "EFR", r, e @ fm @ r
    return _run("ef", _spin_params(j=j), body, backend, q_values, tol)


def check_unitarity(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """R(t) R(t^{-1}) = lambda(t) I with lambda nonzero and lambda(t) = lambda(t^{-1}); lambda goes to details."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)

    def body(ctx):
        f = ctx.field
        product = build_R(j1, j2, T, f) @ build_R(j1, j2, T.inverse(), f)
        lam = product[1, 1]
        key = "lambda" if ctx.exact else f"lambda(q={f.q})"
        ctx.notes[key] = str(lam)
        yield ctx.nonzero("lambda nonzero", lam)
        yield "RR", product, Mat.identity(f, product.rows).scale(lam)
        yield "lambda symmetric", lam, lam.substitute(T.inverse())
    return _run("unitarity", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


def check_limit(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """The top t-coefficient of R(t) sits at t^{4 j1 j2} and equals q^{2 j1 j2} Ř."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    top = j1.twice * j2.twice

    def body(ctx):
        f = ctx.field
        r = build_R(j1, j2, T, f)
        above = [(a, b, exp) for a, b, e in r.nonzero() if isinstance(e, MultiSeries)
                 for exp in e.exponents() if exp[0] > top]
        if above:
            a, b, exp = above[0]
            yield Outcome("nothing above the top power", False,
                          {"identity": "nothing above the top power", "row": a, "col": b, "exp": list(exp)})
        yield "lim", r.scalar_coefficient((top, 0, 0)), build_Rhat(j1, j2, f).scale(f.vpow(top))
    return _run("limit", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


def check_band(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """Block (a, b) of R^{(j1,j2)}(t) is (a-b)-diagonal: entry (i, k) vanishes unless k - i = a - b."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)

    def body(ctx):
        r = build_R(j1, j2, T, ctx.field)
        d = j2.dim
        for row, col, _ in r.nonzero():
            a, i = divmod(row - 1, d)
            b, k = divmod(col - 1, d)
            if k - i != a - b:
                yield Outcome("band", False, {"identity": "band", "row": row, "col": col,
                                              "block": [a + 1, b + 1]})
                return
        yield Outcome("band", True)
    return _run("band", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


def check_r_closed(j, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """The fused R^{(1/2,j)}(t) agrees with its closed form."""
    j = Spin.parse(j)

    def body(ctx):
        yield "R closed form", build_R(HALF, j, T, ctx.field), build_R_half_closed(j, T, ctx.field)
    return _run("r_closed", _spin_params(j=j), body, backend, q_values, tol)


def check_r_fusion(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """All four R fusion recursions starting from (j1, j2) agree with build_R."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)

    def body(ctx):
        f = ctx.field
        up1 = build_R(Spin(j1.twice + 1), j2, T, f)
        up2 = build_R(j1, Spin(j2.twice + 1), T, f)
        yield "Rrecur1", fused_R(j1, j2, 1, T, f), up1
        yield "Rrecur2", fused_R(j1, j2, 2, T, f), up1
        yield "Rrecur3", fused_R(j1, j2, 3, T, f), up2
        yield "Rrecur4", fused_R(j1, j2, 4, T, f), up2
    return _run("r_fusion", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


def check_rhat_fusion(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """Block form of Ř^{(j1,j2)} and the four Ř fusion recursions starting from (j1, j2)."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)

    def body(ctx):
        f = ctx.field
        yield "block form", rhat_block_form(j1, j2, f), build_Rhat(j1, j2, f)
        up1 = build_Rhat(Spin(j1.twice + 1), j2, f)
        up2 = build_Rhat(j1, Spin(j2.twice + 1), f)
        yield "hRrecur1", fused_Rhat(j1, j2, 1, f), up1
        yield "hRrecur2", fused_Rhat(j1, j2, 2, f), up1
        yield "hRrecur3", fused_Rhat(j1, j2, 3, f), up2
        yield "hRrecur4", fused_Rhat(j1, j2, 4, f), up2
    return _run("rhat_fusion", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


# -- K --------------------------------------------------------------------------

def check_K_consistency(j, degree: int, backend: str = "exact", q_values=DEFAULT_Q,
                        tol: float = DEFAULT_TOL) -> Report:
    """
    Closed, alternative and fused K^{(j)} agree up to ``degree``; for j = 1/2 they equal
    the explicit K^{(1/2)}, otherwise every entry also matches the written-out recursion.
    """
    j = Spin.parse(j)
    _check_degree(degree)

    def body(ctx):
        f = ctx.field
        closed = build_K(j, degree, method="closed", field=f)
        yield "closed = alt", closed, build_K(j, degree, method="alt", field=f)
        yield "closed = fused", closed, build_K(j, degree, method="fused", field=f)
        if j == HALF:
            yield "closed = K^(1/2)", closed, build_K_half(degree, f)
        else:
            below = Spin(j.twice - 1)
            entrywise = Mat.from_function(f, j.dim, j.dim,
                                          lambda a, b: krecur_entry(below, a, b, degree, f))
            yield "closed = recursion entries", closed, entrywise
    return _run("k_consistency", {**_spin_params(j=j), "degree": degree}, body, backend, q_values, tol)


def _delta_pairs(max_m: int, degree: int, f: Field) -> Iterator[Tuple[str, MultiSeries, MultiSeries]]:
    zero = MultiSeries(f, degree=degree)

    def t2_prefactor(series: MultiSeries) -> MultiSeries:
        return series.shift((2, 0, 0)) if degree >= 2 else zero

    # x^{-l} Delta(-t) y^{-r} against y^{l-m} Delta~(-t) x^{r-m}
    for m in range(max_m + 1):
        for l in range(m + 1):
            for r in range(m + 1):
                lhs = delta_series(-m, MINUS_T, degree, f) \
                    .letter_power("left", "x", -l).letter_power("right", "y", -r) \
                    .scale(f.qfact(m - l) * f.qfact(m - r))
                shift = l + r - m
                if degree - shift < 0:
                    rhs = zero
                else:
                    rhs = tdelta_series(-m, MINUS_T, degree - shift, f) \
                        .letter_power("left", "y", l - m).letter_power("right", "x", r - m) \
                        .shift((shift, 0, 0)).scale(f.qfact(l) * f.qfact(r))
                yield f"D&tD m={m} l={l} r={r}", lhs, rhs

    for m in range(1, max_m + 1):
        w_arg = MonomialArg(2 * m, (2, 0))
        inner_arg = MonomialArg(-2, (2, 0), -1)
        for mirrored in (False, True):
            first, second = ("y", "x") if mirrored else ("x", "y")
            delta = tdelta_series if mirrored else delta_series
            w_kind, g_kind = ("Wplus", "Gtilde") if mirrored else ("Wminus", "G")
            w = t2_prefactor(gen_series(w_kind, w_arg, max(degree - 2, 0), f))
            g = t2_prefactor(gen_series(g_kind, w_arg, max(degree - 2, 0), f))
            for l in range(m + 1):
                for r in range(1, m + 1):
                    lhs = delta(-m - 1, MINUS_T2, degree, f) \
                        .letter_power("left", first, -l).letter_power("right", second, -r)
                    inner = delta(-m, inner_arg, degree, f)
                    rhs = w.scale(f.vpow(4 * l) * f.qint(m + 1)).shuffle_mul(
                        inner.letter_power("left", first, -l).letter_power("right", second, 1 - r))
                    if l:
                        rhs = rhs + g.scale(f.vpow(2 * (l - 1)) * f.qint(l) * f.qint(m + 1)).shuffle_mul(
                            inner.letter_power("left", first, 1 - l).letter_power("right", second, 1 - r))
                    yield f"Drecur{2 if mirrored else 1} m={m} l={l} r={r}", lhs, rhs

    for m in range(max_m + 1):
        lhs = delta_series(-m - 1, MINUS_T2, degree, f)
        rhs = MultiSeries.constant(f, f.one(), degree)
        for i in range(m + 1):
            rhs = rhs.shuffle_mul(gen_series("Gtilde", MonomialArg(2 * (m - 2 * i), (2, 0)), degree, f))
        yield f"D= m={m}", lhs, rhs
        w = t2_prefactor(gen_series("Wminus", MonomialArg(2 * m, (2, 0)), max(degree - 2, 0), f))
        rhs = w.scale(f.qint(m + 1)).shuffle_mul(delta_series(-m, MonomialArg(-2, (2, 0), -1), degree, f))
        yield f"Dy^-1= m={m}", lhs.letter_power("right", "y", -1), rhs


def check_delta_suite(max_m: int, degree: int, backend: str = "exact", q_values=DEFAULT_Q,
                      tol: float = DEFAULT_TOL) -> Report:
    """
    The Delta identity families up to ``degree``: the Delta / Delta~ symmetry for
    l, r <= m <= max_m, both recurrences for 1 <= m <= max_m, the product formula
    and its right y-erasure for m <= max_m.
    """
    if max_m < 0:
        raise UsageError(f"max_m must be >= 0, but got {max_m}")
    _check_degree(degree)

    def body(ctx):
        yield from _delta_pairs(max_m, degree, ctx.field)
    return _run("delta", {"max_m": max_m, "degree": degree}, body, backend, q_values, tol)


# -- gauge ----------------------------------------------------------------------

def _ddr(j1: Spin, j2: Spin, f: Field) -> Tuple[Mat, Mat]:
    dd = kron(build_D(j1, f), build_D(j2, f))
    r = build_R(j1, j2, T, f)
    return dd @ r, r @ dd


def check_ddr(j1, j2, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """D^{(j1)} (x) D^{(j2)} commutes with R^{(j1,j2)}(t), identically in k."""
    j1, j2 = Spin.parse(j1), Spin.parse(j2)

    def body(ctx):
        yield ("DDR", *_ddr(j1, j2, ctx.field))
    return _run("ddr", _spin_params(j1=j1, j2=j2), body, backend, q_values, tol)


def check_gauge(j1, j2, degree: int, backend: str = "exact", q_values=DEFAULT_Q,
                tol: float = DEFAULT_TOL) -> Report:
    """
    The commutator [D (x) D, R] = 0, both Freidel-Maillet equations for the gauged
    K̄ with k formal, and K̄ at k = 1 equal to K.
    """
    j1, j2 = Spin.parse(j1), Spin.parse(j2)
    _check_degree(degree)

    def body(ctx):
        f = ctx.field
        yield ("DDR", *_ddr(j1, j2, f))
        yield ("RKRKalt", *_fm_sides(j1, j2, degree, f, False, k_builder=build_Kbar))
        yield ("KRKRalt", *_fm_sides(j1, j2, degree, f, True, k_builder=build_Kbar))
        for spin in sorted({j1, j2}):
            kbar = build_Kbar(spin, degree, field=f)
            specialized = kbar.map_entries(lambda e: e.at_k_one() if isinstance(e, MultiSeries) else e)
            yield f"Kbar(k=1) = K j={spin}", specialized, build_K(spin, degree, field=f)
    return _run("gauge", {**_spin_params(j1=j1, j2=j2), "degree": degree}, body, backend, q_values, tol)


# -- words ----------------------------------------------------------------------

def _star(*letters: str, field: Field) -> WordPoly:
    out = WordPoly.unit(field)
    for letter in letters:
        out = out.shuffle(WordPoly.word(field, letter))
    return out


def check_words(max_n: int, backend: str = "exact", q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """Catalan counts and lists, Delta^{(m)}_0 = 1, and the q-Serre relations under the q-shuffle product."""
    if max_n < 0:
        raise UsageError(f"max_n must be >= 0, but got {max_n}")

    def body(ctx):
        f = ctx.field
        for n in range(max_n + 1):
            words = catalan_words(n)
            expected = int(catalan(n))
            yield Outcome(f"Cat_{n} count", len(words) == expected,
                          {"identity": f"Cat_{n} count", "got": len(words), "expected": expected})
            bad = [w for w in words if not is_catalan(w)]
            yield Outcome(f"Cat_{n} words", not bad, {"identity": f"Cat_{n} words", "words": bad[:5]})
            if n in CATALAN_LISTS:
                yield Outcome(f"Cat_{n} list", sorted(words) == sorted(CATALAN_LISTS[n]),
                              {"identity": f"Cat_{n} list", "got": words})
        for m in range(-3, 4):
            yield f"Delta^({m})_0 = 1", delta_n(m, 0, f), WordPoly.unit(f)
        three = f.qint(3)
        for a, b in (("x", "y"), ("y", "x")):
            serre = _star(a, a, a, b, field=f) - _star(a, a, b, a, field=f).scale(three) \
                + _star(a, b, a, a, field=f).scale(three) - _star(b, a, a, a, field=f)
            yield f"q-Serre {a}^3{b}", serre, WordPoly(f)
    return _run("words", {"max_n": max_n}, body, backend, q_values, tol)


# -- mutation -------------------------------------------------------------------

def _flip(k: Mat, site: Tuple[int, int, Tuple[int, int, int], str]) -> Mat:
    row, col, exp, word = site
    entry = k[row, col]
    term = WordPoly(k.field, {word: entry.coefficient_of(exp).coefficient(word)})
    flipped = entry - MultiSeries.monomial(k.field, exp, term + term)
    return k.map_indexed(lambda a, b, e: flipped if (a, b) == (row, col) else e)


def check_mutation(degree: int = 4, count: int = 10, seed: int = 0, backend: str = "exact",
                   q_values=DEFAULT_Q, tol: float = DEFAULT_TOL) -> Report:
    """
    Flip the sign of single terms of K^{(1/2)} up to ``degree`` and require the
    Freidel-Maillet equation to fail for every flip. ``count`` terms are drawn
    with ``seed``; all terms are used when there are no more than ``count``.
    """
    _check_degree(degree)

    def body(ctx):
        f = ctx.field
        base = build_K_half(degree, f)
        sites = [(a, b, exp, w) for a, b, entry in base.nonzero()
                 for exp, poly in entry.terms for w in poly.words()]
        if count < len(sites):
            picks = np.random.default_rng(seed).choice(len(sites), size=count, replace=False)
            sites = [sites[i] for i in sorted(int(p) for p in picks)]
        ctx.notes["flipped"] = len(sites)
        for site in sites:
            label = f"flip ({site[0]},{site[1]}) t^{site[2][0]} {site[3] or '1'}"
            lhs, rhs = _fm_sides(HALF, HALF, degree, f, False, k_matrix=_flip(base, site))
            outcome = ctx.compare(label, lhs, rhs)
            yield Outcome(label, not outcome.passed and outcome.witness is not None,
                          {"identity": label, "undetected": True})
    return _run("mutation", {"degree": degree, "count": count, "seed": seed}, body, backend, q_values, tol)


# -- suites ---------------------------------------------------------------------

CHECKS: Dict[str, Tuple[Callable[..., Report], Tuple[str, ...]]] = {
    "fm": (check_fm, ("j1", "j2", "degree")),
    "fm_alt": (check_fm_alt, ("j1", "j2", "degree")),
    "ybe": (check_ybe, ("j1", "j2", "j3")),
    "mixed": (check_mixed, ("j1", "j2", "j3")),
    "ef": (check_EF_suite, ("j1",)),
    "unitarity": (check_unitarity, ("j1", "j2")),
    "limit": (check_limit, ("j1", "j2")),
    "delta": (check_delta_suite, ("max_m", "degree")),
    "k_consistency": (check_K_consistency, ("j1", "degree")),
    "band": (check_band, ("j1", "j2")),
    "gauge": (check_gauge, ("j1", "j2", "degree")),
    "ddr": (check_ddr, ("j1", "j2")),
    "r_closed": (check_r_closed, ("j1",)),
    "r_fusion": (check_r_fusion, ("j1", "j2")),
    "rhat_fusion": (check_rhat_fusion, ("j1", "j2")),
    "words": (check_words, ("max_n",)),
    "mutation": (check_mutation, ("degree", "count", "seed")),
}
assert set(CHECKS) == set(CHECK_NAMES)


def run_spec(spec: CheckSpec) -> Report:
    """Run one CheckSpec; usage errors become failing reports with ``error`` set."""
    fn, names = CHECKS[spec.name]
    args = [getattr(spec, name) for name in names]
    try:
        return fn(*args, backend=spec.backend, q_values=spec.q_values, tol=spec.tol)
    except QShuffleError as e:
        logger.error("check %s stopped: %s", spec.name, e)
        return Report(spec.name, dict(zip(names, args)), False, error=f"{type(e).__name__}: {e}")


def run_suite(specs: Sequence[CheckSpec], jobs: int = 1) -> List[Report]:
    """
    Run every spec; reports come back in input order whatever the scheduling.

    :param jobs: worker processes; 1 runs in-process
    """
    specs = list(specs)
    if jobs < 1:
        raise UsageError(f"jobs must be >= 1, but got {jobs}")
    logger.info("running %d checks with %d job(s)", len(specs), jobs)
    if jobs == 1 or len(specs) < 2:
        return [run_spec(spec) for spec in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_spec, specs))
