import operator
from collections import Counter, defaultdict
from functools import lru_cache, reduce

import pytest
from hypothesis import assume, given, settings, strategies as st

from qshuffle.errors import UsageError
from qshuffle.scalar import EXACT, qint
from qshuffle.words import (
    WordPoly, alternating_word, catalan_words, height, is_catalan, pairing, shuffle_words, swap_letters, zeta,
)

words = st.text(alphabet="xy", max_size=4)


def w(word, coeff=None):
    return WordPoly.word(EXACT, word, coeff)


def test_shuffle_of_two_letters():
    assert shuffle_words("x", "y") == (("xy", ((0, 1),)), ("yx", ((-2, 1),)))
    assert shuffle_words("x", "x") == (("xx", ((0, 1), (2, 1))),)


def test_shuffle_is_not_commutative():
    assert w("x").shuffle(w("y")) != w("y").shuffle(w("x"))


@settings(max_examples=500)
@given(words, words, words)
def test_shuffle_is_associative(a, b, c):
    left = w(a).shuffle(w(b)).shuffle(w(c))
    right = w(a).shuffle(w(b).shuffle(w(c)))
    assert left == right


@given(words)
def test_unit_is_neutral(a):
    unit = WordPoly.unit(EXACT)
    assert unit.shuffle(w(a)) == w(a)
    assert w(a).concat(unit) == w(a)


@settings(max_examples=500)
@given(words, words)
def test_zeta_reverses_both_products(a, b):
    assert zeta(w(a).shuffle(w(b))) == zeta(w(b)).shuffle(zeta(w(a)))
    assert zeta(w(a).concat(w(b))) == zeta(w(b)).concat(zeta(w(a)))


@given(words, words)
def test_swap_preserves_both_products(a, b):
    assert swap_letters(w(a).shuffle(w(b))) == swap_letters(w(a)).shuffle(swap_letters(w(b)))
    assert swap_letters(w(a).concat(w(b))) == swap_letters(w(a)).concat(swap_letters(w(b)))


def test_zeta_and_swap_examples():
    assert zeta(w("xxy")) == w("xyy")
    assert swap_letters(w("xxy")) == w("yyx")
    assert zeta(w("xyx")) == swap_letters(w("xyx").reverse())


def test_erase_and_letter_power():
    p = w("xy") + w("yx", qint(2))
    assert p.erase("left", "x") == w("y")
    assert p.erase("right", "x") == w("y", qint(2))
    assert p.letter_power("left", "y", -1) == w("x", qint(2))
    assert w("y").letter_power("left", "x", 2) == w("xxy")
    assert w("xxy").letter_power("left", "x", -3) == WordPoly(EXACT)


def test_bad_arguments():
    with pytest.raises(UsageError):
        w("xz")
    with pytest.raises(UsageError):
        w("x").erase("middle", "x")
    with pytest.raises(UsageError):
        alternating_word("H", 1)


def test_catalan_words():
    assert [len(catalan_words(n)) for n in range(6)] == [1, 1, 2, 5, 14, 42]
    assert catalan_words(2) == ["xxyy", "xyxy"]
    assert set(catalan_words(3)) == {"xyxyxy", "xxyyxy", "xyxxyy", "xxyxyy", "xxxyyy"}
    assert all(is_catalan(c) for c in catalan_words(4))
    assert not is_catalan("yx")
    assert height("xxyy") == 2
    assert height("") == 0


def test_alternating_words():
    assert alternating_word("Wminus", 2) == "xyxyx"
    assert alternating_word("Wplus", 1) == "yxy"
    assert alternating_word("Gtilde", 2) == "xyxy"
    assert alternating_word("G", 0) == ""


def test_json_round_trip():
    p = w("xy", qint(3)) - w("")
    assert WordPoly.from_json(EXACT, p.to_json()) == p


def test_shuffle_letter_into_word():
    q_squared = EXACT.vpow(4)
    assert w("x").shuffle(w("xy")) == w("xxy", 1 + q_squared) + w("xyx")


@lru_cache(maxsize=None)
def _shuffle_from_the_right(u, v):
    """u * v = (u * v_1..v_{s-1}) v_s + (u_1..u_{r-1} * v) u_r q^{<u_r,v_1>+...+<u_r,v_s>}."""
    if not u or not v:
        return {u + v: {0: 1}}
    acc = defaultdict(Counter)
    for word, laurent in _shuffle_from_the_right(u, v[:-1]).items():
        for e, c in laurent.items():
            acc[word + v[-1]][e] += c
    weight = sum(pairing(u[-1], b) for b in v)
    for word, laurent in _shuffle_from_the_right(u[:-1], v).items():
        for e, c in laurent.items():
            acc[word + u[-1]][e + weight] += c
    out = {}
    for word, laurent in acc.items():
        nonzero = {e: c for e, c in laurent.items() if c}
        if nonzero:
            out[word] = nonzero
    return out


@settings(max_examples=500)
@given(st.text(alphabet="xy", max_size=5), st.text(alphabet="xy", max_size=5))
def test_shuffle_agrees_with_last_letter_recursion(a, b):
    assert {word: dict(laurent) for word, laurent in shuffle_words(a, b)} == _shuffle_from_the_right(a, b)


@given(st.integers(min_value=0, max_value=4), st.integers(min_value=0, max_value=4), st.data())
def test_shuffle_is_graded(m, n, data):
    left = data.draw(st.lists(st.text(alphabet="xy", min_size=m, max_size=m), min_size=1, max_size=3))
    right = data.draw(st.lists(st.text(alphabet="xy", min_size=n, max_size=n), min_size=1, max_size=3))
    p = reduce(operator.add, [w(a) for a in left])
    r = reduce(operator.add, [w(b, qint(2)) for b in right])
    product = p.shuffle(r)
    assert product
    assert product.is_homogeneous(m + n)


@given(words)
def test_erase_undoes_concatenation(a):
    assert w("x").concat(w(a)).erase("left", "x") == w(a)
    assert w("y").concat(w(a)).erase("left", "y") == w(a)
    assert w(a).concat(w("y")).erase("right", "y") == w(a)
    assert w(a).letter_power("left", "x", 2).letter_power("left", "x", -2) == w(a)


@given(words, st.integers(min_value=1, max_value=3))
def test_erasing_a_missing_prefix_gives_zero(a, n):
    assume(not a.startswith("x" * n))
    assert w(a).letter_power("left", "x", -n) == WordPoly(EXACT)


def test_erase_of_unit_is_zero():
    assert WordPoly.unit(EXACT).erase("left", "x") == WordPoly(EXACT)
    assert w("yx").erase("left", "x") == WordPoly(EXACT)
