import pytest
from hypothesis import given, settings, strategies as st

from qshuffle.errors import UsageError
from qshuffle.matrix import LegSpec, Mat, kron, leg_embed, mat_equal, mat_residual
from qshuffle.scalar import EXACT, NumericField, qint
from qshuffle.series import MultiSeries, T, gen_series
from qshuffle.words import WordPoly


def ints(rows):
    return Mat(EXACT, [[EXACT.from_int(x) for x in row] for row in rows])


def test_indexing_is_one_based():
    m = ints([[1, 2], [3, 4]])
    assert m[1, 1] == 1
    assert m[2, 1] == 3
    assert m.shape == (2, 2)
    assert [(a, b) for a, b, _ in m.nonzero()] == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_bad_shapes():
    with pytest.raises(UsageError):
        Mat(EXACT, [])
    with pytest.raises(UsageError):
        Mat(EXACT, [[1, 2], [3]])
    with pytest.raises(UsageError):
        ints([[1, 2]]) @ ints([[1, 2]])
    with pytest.raises(UsageError):
        ints([[1]]) + ints([[1, 2]])


def test_mat_mul():
    a = ints([[1, 2], [3, 4]])
    b = ints([[0, 1], [1, 0]])
    assert mat_equal(a @ b, ints([[2, 1], [4, 3]]))[0]
    assert mat_equal(a @ Mat.identity(EXACT, 2), a)[0]


def test_kron_orders_first_leg_slowest():
    a = ints([[1, 2], [3, 4]])
    b = ints([[0, 5], [6, 7]])
    k = kron(a, b)
    assert k.shape == (4, 4)
    assert k[1, 2] == 5
    assert k[2, 1] == 6
    assert k[1, 4] == 10
    assert k[4, 3] == 24
    assert k[3, 2] == 15


def test_kron_of_series_keeps_factor_order():
    x = MultiSeries.constant(EXACT, WordPoly.word(EXACT, "x"))
    y = MultiSeries.constant(EXACT, WordPoly.word(EXACT, "y"))
    k = kron(Mat(EXACT, [[x]]), Mat(EXACT, [[y]]))
    assert k[1, 1] == x.shuffle_mul(y)
    assert k[1, 1] != y.shuffle_mul(x)


def test_leg_embed_contiguous():
    a = ints([[1, 2], [3, 4]])
    spec = LegSpec((2, 2, 2), (1, 2))
    embedded = leg_embed(kron(a, a), spec)
    assert mat_equal(embedded, kron(kron(a, a), Mat.identity(EXACT, 2)))[0]
    assert mat_equal(leg_embed(a, LegSpec((2, 2, 2), (2,))),
                     kron(kron(Mat.identity(EXACT, 2), a), Mat.identity(EXACT, 2)))[0]


def test_leg_embed_on_outer_legs_conjugates_by_swap():
    a = ints([[1, 2], [3, 4]])
    b = ints([[5, 0], [1, 1]])
    swap23 = leg_embed(ints([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]), LegSpec((2, 2, 2), (2, 3)))
    on_12 = leg_embed(kron(a, b), LegSpec((2, 2, 2), (1, 2)))
    on_13 = leg_embed(kron(a, b), LegSpec((2, 2, 2), (1, 3)))
    assert mat_equal(on_13, swap23 @ on_12 @ swap23)[0]


def test_leg_embed_rectangular_needs_contiguous_legs():
    e = Mat.zeros(EXACT, 4, 3)
    assert leg_embed(e, LegSpec((2, 2, 2), (1, 2))).shape == (8, 6)
    with pytest.raises(UsageError):
        leg_embed(e, LegSpec((2, 2, 2), (1, 3)))
    with pytest.raises(UsageError):
        leg_embed(ints([[1]]), LegSpec((2, 2), (1,)))


def test_leg_spec_validation():
    with pytest.raises(UsageError):
        LegSpec((2,), (1,))
    with pytest.raises(UsageError):
        LegSpec((2, 2, 2), (3, 1))
    with pytest.raises(UsageError):
        LegSpec((2, 2, 2), (4,))
    assert LegSpec((2, 3, 4), (1, 3)).leg_dimension == 8
    assert not LegSpec((2, 3, 4), (1, 3)).contiguous


def test_mat_equal_witness_for_series():
    wm = gen_series("Wminus", T, 3)
    other = wm + MultiSeries.monomial(EXACT, (2, 0, 0), WordPoly.word(EXACT, "xxyyx"))
    zero = EXACT.zero()
    ok, witness = mat_equal(Mat(EXACT, [[wm, zero]]), Mat(EXACT, [[other, zero]]))
    assert not ok
    assert (witness.row, witness.col, witness.exponent) == (1, 1, (2, 0, 0))
    assert witness.to_json()["exp"] == [2, 0, 0]


def test_mat_equal_witness_for_scalars():
    ok, witness = mat_equal(ints([[1, 2]]), Mat(EXACT, [[EXACT.one(), qint(2)]]))
    assert not ok
    assert (witness.row, witness.col, witness.exponent) == (1, 2, None)
    assert witness.difference == 2 - qint(2)


def test_mat_residual():
    field = NumericField(1.5)
    a = Mat(field, [[1.0, 2.0], [0.0, 4.0]])
    assert mat_residual(a, a) == (0.0, None)
    residual, witness = mat_residual(a, Mat(field, [[1.0, 2.0], [0.0, 3.0]]))
    assert residual == pytest.approx(0.25)
    assert (witness.row, witness.col) == (2, 2)


def test_json_round_trip():
    m = Mat(EXACT, [[gen_series("G", T, 2), EXACT.zero()], [EXACT.zero(), gen_series("Gtilde", T, 2)]])
    data = m.to_json()
    assert data["ring"] == "series"
    assert mat_equal(Mat.from_json(EXACT, data), m)[0]
    scalars = ints([[1, 0], [0, 1]])
    assert mat_equal(Mat.from_json(EXACT, scalars.to_json()), scalars)[0]


scalar_entries = st.builds(
    lambda n, k: qint(n) * EXACT.vpow(k),
    st.integers(min_value=-2, max_value=3), st.integers(min_value=-2, max_value=2),
)


@st.composite
def series_entries(draw):
    terms = {}
    for _ in range(draw(st.integers(min_value=1, max_value=2))):
        exp = (draw(st.integers(min_value=0, max_value=1)), draw(st.integers(min_value=0, max_value=1)), 0)
        word = draw(st.text(alphabet="xy", max_size=2))
        terms[exp] = WordPoly.word(EXACT, word, draw(scalar_entries))
    return MultiSeries(EXACT, terms)


entries = st.one_of(scalar_entries, series_entries())


def matrices(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda grid: Mat(EXACT, grid))


@st.composite
def chains(draw):
    dims = [draw(st.integers(min_value=1, max_value=2)) for _ in range(4)]
    return tuple(draw(matrices(dims[i], dims[i + 1])) for i in range(3))


@settings(max_examples=100)
@given(chains())
def test_mat_mul_is_associative(chain):
    a, b, c = chain
    assert mat_equal((a @ b) @ c, a @ (b @ c))[0]


@settings(max_examples=100)
@given(chains(), scalar_entries)
def test_scalars_pass_through_products(chain, c):
    a, b, _ = chain
    assert mat_equal(a.scale(c) @ b, (a @ b).scale(c))[0]
    assert mat_equal(a @ b.scale(c), (a @ b).scale(c))[0]
