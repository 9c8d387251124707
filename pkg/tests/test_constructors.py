from fractions import Fraction

import pytest

from qshuffle.constructors import (
    HALF, K_METHODS, Spin, build_D, build_E, build_F, build_H, build_K, build_K_half, build_Kbar, build_R,
    build_R_half_closed, build_Rhat, k_entry, krecur_entry, phi_coeffs, rho, rhat_block_form,
)
from qshuffle.errors import UsageError
from qshuffle.matrix import Mat, mat_equal
from qshuffle.scalar import EXACT, qint, sqrt_brackets
from qshuffle.series import MultiSeries, S, T, gen_series, laurent_c, scalar_c
from qshuffle.words import WordPoly


def const(value):
    return WordPoly(EXACT, {"": value})


@pytest.mark.parametrize("value, twice", [("1/2", 1), ("3/2", 3), (1, 2), ("2", 4), (Fraction(5, 2), 5)])
def test_spin_parse(value, twice):
    spin = Spin.parse(value)
    assert spin.twice == twice
    assert spin.dim == twice + 1
    assert Spin.parse(str(spin)) == spin


@pytest.mark.parametrize("value", ["0", "-1/2", "1/3", "abc", 0])
def test_spin_parse_rejects(value):
    with pytest.raises(UsageError):
        Spin.parse(value)


def test_spin_str():
    assert str(HALF) == "1/2"
    assert str(Spin(2)) == "1"
    assert Spin(1) < Spin(3)


def test_E_and_F_for_spin_one():
    e = build_E("1/2")
    assert e.shape == (4, 3)
    assert e[1, 1] == 1
    assert e[3, 2] == sqrt_brackets((2,)) / qint(2)
    assert e[2, 2] == sqrt_brackets((2,)) / qint(2)
    assert e[4, 3] == 1
    assert build_F("1/2").shape == (3, 4)


@pytest.mark.parametrize("j", ["1/2", "1", "3/2"])
def test_F_is_a_left_inverse_of_E(j):
    n = Spin.parse(j).twice
    assert mat_equal(build_F(j) @ build_E(j), Mat.identity(EXACT, n + 2))[0]


def test_H_for_spin_one():
    h = build_H("1/2")
    c = scalar_c(EXACT, 2)
    assert mat_equal(h, Mat.diag(EXACT, [c * qint(2), c * 2, c * qint(2)]))[0]


def test_R_half_half():
    r = build_R("1/2", "1/2")
    assert r.shape == (4, 4)
    assert r[1, 1] == laurent_c(EXACT, T.times_v(2))
    assert r[2, 2] == laurent_c(EXACT, T)
    assert r[2, 3] == scalar_c(EXACT, 2)
    assert not r[1, 2]


def test_R_half_closed_spin_one():
    r = build_R_half_closed(1)
    assert r.shape == (6, 6)
    corner = r[1, 1]
    assert corner.coefficient_of((2, 0, 0)) == const(EXACT.vpow(4))
    assert corner.coefficient_of((0, 0, 0)) == const(-qint(2))
    assert r[2, 4] == laurent_c(EXACT, T.times_v(1)).scale(scalar_c(EXACT, 2) * sqrt_brackets((2,)))
    assert not r[1, 4]


def test_R_half_closed_matches_fusion():
    assert mat_equal(build_R_half_closed(1), build_R("1/2", 1))[0]


def test_Rhat_examples():
    assert mat_equal(build_Rhat("1/2", "1/2"),
                     Mat.diag(EXACT, [EXACT.vpow(1), EXACT.vpow(-1), EXACT.vpow(-1), EXACT.vpow(1)]))[0]
    one = EXACT.one()
    expected = [EXACT.vpow(2), one, EXACT.vpow(-2), EXACT.vpow(-2), one, EXACT.vpow(2)]
    assert mat_equal(build_Rhat("1/2", 1), Mat.diag(EXACT, expected))[0]


@pytest.mark.parametrize("j1, j2", [("1/2", "1/2"), ("1/2", "1"), ("1", "3/2"), ("3/2", "1/2")])
def test_Rhat_block_form(j1, j2):
    assert mat_equal(rhat_block_form(j1, j2), build_Rhat(j1, j2))[0]


@pytest.mark.parametrize("a, b, j, expected", [
    (1, 1, "1/2", Fraction(1)),
    (1, 2, "1/2", Fraction(0)),
    (2, 1, "1/2", Fraction(0)),
    (2, 2, "1/2", Fraction(1)),
    (1, 1, "1", Fraction(7, 2)),
])
def test_rho(a, b, j, expected):
    assert rho(a, b, j) == expected


def test_phi_for_spin_half():
    coeffs = phi_coeffs(1, 1, "1/2")
    assert coeffs.phi == EXACT.vpow(2)
    assert coeffs.psi == EXACT.vpow(2)


def test_K_half_entries():
    k = build_K_half(4)
    t2 = T.power(2)
    assert k[1, 2] == gen_series("G", t2, 4)
    assert k[2, 1] == gen_series("Gtilde", t2, 4)
    top = k[1, 1]
    assert top.exponents() == [(1, 0, 0), (3, 0, 0)]
    assert top.coefficient_of((3, 0, 0)) == WordPoly.word(EXACT, "xyx", EXACT.vpow(2))
    assert k[2, 2].coefficient_of((1, 0, 0)) == WordPoly.word(EXACT, "y", EXACT.vpow(2))
    assert not build_K_half(0)[1, 1]


@pytest.mark.parametrize("method", K_METHODS)
def test_K_half_constructions_agree(method):
    assert mat_equal(build_K("1/2", 4, method=method), build_K_half(4))[0]


def test_K_spin_one_constructions_agree():
    closed = build_K(1, 4)
    assert mat_equal(build_K(1, 4, method="alt"), closed)[0]
    assert mat_equal(build_K(1, 4, method="fused"), closed)[0]


def test_K_spin_one_matches_recursion():
    closed = build_K(1, 4)
    for a in range(1, 4):
        for b in range(1, 4):
            assert krecur_entry("1/2", a, b, 4) == closed[a, b]


def test_K_variable_and_argument():
    assert build_K("1/2", 4, var="s")[1, 2] == gen_series("G", S.power(2), 4)
    shifted = build_K("1/2", 4, arg=T.times_v(2))
    assert shifted[1, 2] == gen_series("G", T.times_v(2).power(2), 4)


def test_K_rejects_bad_arguments():
    with pytest.raises(UsageError):
        build_K("1/2", 4, method="cubic")
    with pytest.raises(UsageError):
        build_K("1/2", 4, var="u")
    with pytest.raises(UsageError):
        build_K("1/2", -1)
    with pytest.raises(UsageError):
        build_K("1/2", 4, arg=T.power(2))


def test_k_entry_outside_is_zero():
    k = build_K_half(2)
    assert k_entry(k, 1, 2) == k[1, 2]
    assert not k_entry(k, 0, 1)
    assert not k_entry(k, 2, 3)


def test_D_and_its_inverse():
    d = build_D(1)
    unit = WordPoly.unit(EXACT)
    assert d[3, 3] == MultiSeries.monomial(EXACT, (0, 0, 2), unit)
    assert mat_equal(d @ build_D(1, inverse=True), Mat.identity(EXACT, 3))[0]


def test_Kbar_is_a_k_shift_of_K():
    k = build_K("1/2", 4)
    kbar = build_Kbar("1/2", 4)
    assert kbar[1, 2] == k[1, 2].shift((0, 0, 1))
    assert kbar[2, 1] == k[2, 1].shift((0, 0, -1))
    assert kbar[1, 1] == k[1, 1]
    for a in range(1, 3):
        for b in range(1, 3):
            assert kbar[a, b].at_k_one() == k[a, b]


def test_numeric_builders_match_exact(numeric):
    exact, approx = build_E(1), build_E(1, numeric)
    for a, b, value in exact.nonzero():
        assert approx[a, b] == pytest.approx(EXACT.to_float(value, numeric.q))
