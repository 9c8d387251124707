"""
Dense matrices over a coefficient field or over :class:`MultiSeries`.

Indices in the public API are 1-based. Tensor products order legs with
leg 1 slowest. Entry products never reorder factors: series entries are
multiplied with the q-shuffle product, scalar entries act centrally.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import UsageError
from .scalar import EXACT, Field
from .series import Exponent, MonomialArg, MultiSeries
from .words import WordPoly

Entry = Any


def _is_series(e: Entry) -> bool:
    return isinstance(e, MultiSeries)


def entry_mul(a: Entry, b: Entry) -> Entry:
    if _is_series(a):
        return a.shuffle_mul(b) if _is_series(b) else a.scale(b)
    if _is_series(b):
        return b.scale(a)
    return a * b


def entry_add(a: Entry, b: Entry) -> Entry:
    if _is_series(b) and not _is_series(a):
        return b + a
    return a + b


class Mat:
    """
    Immutable rectangular matrix.

    :param field: coefficient field of all entries
    :param entries: rows of entries; each entry is a field element or a MultiSeries
    """

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence[Entry]]):
        rows = tuple(tuple(r) for r in entries)
        if not rows or not rows[0]:
            raise UsageError("matrices must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise UsageError("matrix rows must all have the same length")
        self.field = field
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.entries = rows

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        zero = field.zero()
        return cls(field, [[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        zero, one = field.zero(), field.one()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, field: Field, values: Sequence[Entry]) -> "Mat":
        n, zero = len(values), field.zero()
        return cls(field, [[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_function(cls, field: Field, rows: int, cols: int, fn: Callable[[int, int], Entry]) -> "Mat":
        """Build from ``fn(a, b)`` with 1-based indices."""
        return cls(field, [[fn(a, b) for b in range(1, cols + 1)] for a in range(1, rows + 1)])

    @classmethod
    def from_sparse(cls, field: Field, rows: int, cols: int, values: Dict[Tuple[int, int], Entry]) -> "Mat":
        """Build from ``{(a, b): entry}`` with 1-based indices; missing entries are zero."""
        grid = [[field.zero()] * cols for _ in range(rows)]
        for (a, b), value in values.items():
            grid[a - 1][b - 1] = value
        return cls(field, grid)

    @property
    def ring(self) -> str:
        return "series" if any(_is_series(e) for row in self.entries for e in row) else "scalar"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, index: Tuple[int, int]) -> Entry:
        a, b = index
        return self.entries[a - 1][b - 1]

    def nonzero(self) -> Iterator[Tuple[int, int, Entry]]:
        """1-based (row, col, entry) for every nonzero entry, row-major."""
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if e:
                    yield i + 1, j + 1, e

    def map_entries(self, fn: Callable[[Entry], Entry]) -> "Mat":
        return Mat(self.field, [[fn(e) for e in row] for row in self.entries])

    def map_indexed(self, fn: Callable[[int, int, Entry], Entry]) -> "Mat":
        return Mat(self.field, [[fn(i + 1, j + 1, e) for j, e in enumerate(row)]
                                for i, row in enumerate(self.entries)])

    def scale(self, c: Any) -> "Mat":
        return self.map_entries(lambda e: entry_mul(c, e) if e else e)

    def _check_shape(self, other: "Mat"):
        if self.shape != other.shape:
            raise UsageError(f"shape mismatch: {self.shape} vs {other.shape}")
        if self.field != other.field:
            raise UsageError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_shape(other)
        return Mat(self.field, [[entry_add(a, b) for a, b in zip(ra, rb)]
                                for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        return self.map_entries(lambda e: -e)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def substitute(self, arg: MonomialArg, var: int = 0) -> "Mat":
        return self.map_entries(lambda e: e.substitute(arg, var) if _is_series(e) else e)

    def truncate(self, degree: Optional[int]) -> "Mat":
        return self.map_entries(lambda e: e.truncate(degree) if _is_series(e) else e)

    def scalar_coefficient(self, exp: Exponent) -> "Mat":
        """Coefficient of a monomial in a matrix whose series entries carry only the empty word."""
        zero = self.field.zero()

        def pick(e):
            if _is_series(e):
                return e.coefficient_of(exp).coefficient("")
            return e if tuple(exp) == (0, 0, 0) else zero
        return self.map_entries(pick)

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, ring={self.ring})"

    def __str__(self):
        cells = [[str(e) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)

    def to_json(self) -> Dict[str, Any]:
        ring = self.ring

        def dump(e):
            if _is_series(e):
                return e.to_json()
            if ring == "series":
                return MultiSeries.constant(self.field, e).to_json() if e else MultiSeries(self.field).to_json()
            return self.field.coeff_to_json(e)
        return {"rows": self.rows, "cols": self.cols, "ring": ring,
                "entries": [[dump(e) for e in row] for row in self.entries]}

    @classmethod
    def from_json(cls, field: Field, data: Dict[str, Any]) -> "Mat":
        if data["ring"] == "series":
            load = lambda e: MultiSeries.from_json(field, e)
        else:
            load = field.coeff_from_json
        return cls(field, [[load(e) for e in row] for row in data["entries"]])


def mat_mul(a: Mat, b: Mat) -> Mat:
    """
    Row-column product; entry products keep the left factor on the left.

    :raise qshuffle.UsageError: on dimension or field mismatch.
    """
    if a.cols != b.rows:
        raise UsageError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    if a.field != b.field:
        raise UsageError(f"field mismatch: {a.field.name} vs {b.field.name}")
    b_rows = [[(j, e) for j, e in enumerate(row) if e] for row in b.entries]
    zero = a.field.zero()
    out = []
    for row in a.entries:
        acc: Dict[int, Entry] = {}
        for k, aik in enumerate(row):
            if not aik:
                continue
            for j, bkj in b_rows[k]:
                product = entry_mul(aik, bkj)
                acc[j] = entry_add(acc[j], product) if j in acc else product
        out.append([acc.get(j, zero) for j in range(b.cols)])
    return Mat(a.field, out)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product a (x) b, index (i1, i2) -> (i1 - 1) * b.rows + i2."""
    if a.field != b.field:
        raise UsageError(f"field mismatch: {a.field.name} vs {b.field.name}")
    grid = [[a.field.zero()] * (a.cols * b.cols) for _ in range(a.rows * b.rows)]
    for i1, k1, x in a.nonzero():
        for i2, k2, y in b.nonzero():
            grid[(i1 - 1) * b.rows + i2 - 1][(k1 - 1) * b.cols + k2 - 1] = entry_mul(x, y)
    return Mat(a.field, grid)


@dataclass(frozen=True)
class LegSpec:
    """
    Placement of a matrix on some legs of a 2- or 3-fold tensor space.

    :param dims: leg dimensions, leg 1 first
    :param legs: 1-based target legs, increasing
    """

    dims: Tuple[int, ...]
    legs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) not in (2, 3) or any(d < 1 for d in self.dims):
            raise UsageError(f"dims must list 2 or 3 positive leg dimensions, but got {self.dims}")
        if not self.legs or list(self.legs) != sorted(set(self.legs)) \
                or self.legs[0] < 1 or self.legs[-1] > len(self.dims):
            raise UsageError(f"legs must be increasing indices into {self.dims}, but got {self.legs}")

    @property
    def dimension(self) -> int:
        return math.prod(self.dims)

    @property
    def leg_dimension(self) -> int:
        return math.prod(self.dims[l - 1] for l in self.legs)

    @property
    def contiguous(self) -> bool:
        return list(self.legs) == list(range(self.legs[0], self.legs[-1] + 1))


def leg_embed(m: Mat, spec: LegSpec) -> Mat:
    """
    Place ``m`` on the legs of ``spec`` with the identity elsewhere.

    A square ``m`` may sit on any legs. A rectangular ``m`` (a fusion map)
    must sit on contiguous legs, with one side matching the legs' dimension.
    """
    field = m.field
    before = math.prod(spec.dims[:spec.legs[0] - 1])
    after = math.prod(spec.dims[spec.legs[-1]:])
    if spec.contiguous:
        if spec.leg_dimension not in (m.rows, m.cols):
            raise UsageError(f"{m.rows}x{m.cols} matrix does not fit legs {spec.legs} of {spec.dims}")
        out = m
        if before > 1:
            out = kron(Mat.identity(field, before), out)
        if after > 1:
            out = kron(out, Mat.identity(field, after))
        return out
    if m.rows != m.cols or m.rows != spec.leg_dimension:
        raise UsageError(f"{m.rows}x{m.cols} matrix does not fit legs {spec.legs} of {spec.dims}")
    dims = spec.dims
    leg_dims = [dims[l - 1] for l in spec.legs]
    others = [i for i in range(1, len(dims) + 1) if i not in spec.legs]
    strides = [math.prod(dims[i:]) for i in range(1, len(dims) + 1)]
    grid = [[field.zero()] * spec.dimension for _ in range(spec.dimension)]
    for r, c, e in m.nonzero():
        r_idx = _unravel(r - 1, leg_dims)
        c_idx = _unravel(c - 1, leg_dims)
        for rest in itertools.product(*(range(dims[o - 1]) for o in others)):
            row = col = 0
            for leg, ri, ci in zip(spec.legs, r_idx, c_idx):
                row += ri * strides[leg - 1]
                col += ci * strides[leg - 1]
            for o, oi in zip(others, rest):
                row += oi * strides[o - 1]
                col += oi * strides[o - 1]
            grid[row][col] = e
    return Mat(field, grid)


def _unravel(index: int, dims: Sequence[int]) -> List[int]:
    out = []
    for d in reversed(dims):
        out.append(index % d)
        index //= d
    return out[::-1]


@dataclass(frozen=True)
class Witness:
    """First difference between two matrices: 1-based entry, monomial (None for scalars), lhs - rhs."""

    row: int
    col: int
    exponent: Optional[Exponent]
    difference: Any

    def to_json(self) -> Dict[str, Any]:
        diff = self.difference
        if isinstance(diff, WordPoly):
            diff = diff.to_json()
        elif hasattr(diff, "to_json"):
            diff = diff.to_json()
        return {"row": self.row, "col": self.col,
                "exp": list(self.exponent) if self.exponent is not None else None,
                "difference": diff}


def _as_series(e: Entry, field: Field) -> MultiSeries:
    return e if _is_series(e) else MultiSeries.constant(field, e)


def mat_equal(a: Mat, b: Mat) -> Tuple[bool, Optional[Witness]]:
    """
    Exact entrywise equality, series compared up to their common truncation bound.

    :return: ``(True, None)`` or ``(False, witness)`` for the first differing entry (row-major)
        and its first differing monomial.
    """
    a._check_shape(b)
    for i, (ra, rb) in enumerate(zip(a.entries, b.entries)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if not _is_series(x) and not _is_series(y):
                diff = x - y
                if diff:
                    return False, Witness(i + 1, j + 1, None, diff)
                continue
            found = _as_series(x, a.field).difference_witness(_as_series(y, a.field))
            if found is not None:
                exp, poly = found
                return False, Witness(i + 1, j + 1, exp, poly)
    return True, None


def _aligned(x: Entry, y: Entry, field: Field) -> Iterator[Tuple[Optional[Exponent], str, Any, Any]]:
    if not _is_series(x) and not _is_series(y):
        yield None, "", x, y
        return
    sx, sy = _as_series(x, field), _as_series(y, field)
    degree = sx.degree if sy.degree is None else (sy.degree if sx.degree is None else min(sx.degree, sy.degree))
    exps = sorted(set(sx.exponents()) | set(sy.exponents()))
    for exp in exps:
        if degree is not None and exp[0] + exp[1] > degree:
            continue
        px, py = sx.coefficient_of(exp), sy.coefficient_of(exp)
        for w in sorted(set(px.words()) | set(py.words()), key=lambda w: (len(w), w)):
            yield exp, w, px.coefficient(w), py.coefficient(w)


def mat_residual(a: Mat, b: Mat) -> Tuple[float, Optional[Witness]]:
    """
    Max-abs coefficient difference of two numeric matrices, normalized by the
    largest coefficient magnitude on either side.

    :return: ``(residual, witness at the worst coefficient or None)``
    """
    a._check_shape(b)
    locations, lhs, rhs = [], [], []
    for i, (ra, rb) in enumerate(zip(a.entries, b.entries)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            for exp, w, cx, cy in _aligned(x, y, a.field):
                locations.append((i + 1, j + 1, exp, w))
                lhs.append(a.field.to_float(cx))
                rhs.append(a.field.to_float(cy))
    if not locations:
        return 0.0, None
    lhs_arr, rhs_arr = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    diff = np.abs(lhs_arr - rhs_arr)
    scale = max(float(np.max(np.abs(lhs_arr))), float(np.max(np.abs(rhs_arr))), np.finfo(float).tiny)
    worst = int(np.argmax(diff))
    residual = float(diff[worst]) / scale
    if residual == 0.0:
        return 0.0, None
    row, col, exp, w = locations[worst]
    return residual, Witness(row, col, exp, {"word": w, "lhs": lhs[worst], "rhs": rhs[worst]})
