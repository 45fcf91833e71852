from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lyat.fields import GF, QQ, CharacteristicError, field_from_spec


def test_field_from_spec():
    assert field_from_spec("Q") is QQ and field_from_spec("QQ") is QQ
    assert field_from_spec("Fp:7") == GF(7) == field_from_spec("Fp 7")
    for bad in ("Fp:8", "Fp:1", "R", "Fp:x"):
        with pytest.raises(ValueError):
            field_from_spec(bad)


def test_rationals_lowest_terms():
    x = QQ.scalar("6/4")
    assert x == Fraction(3, 2) and x.denominator == 2
    assert QQ.scalar(-3) == -3
    assert QQ.format(Fraction(-2, 4)) == "-1/2"
    with pytest.raises(TypeError):
        QQ.scalar(0.5)


def test_residues_in_range():
    F = GF(7)
    assert F.scalar(-1) == 6
    assert F.scalar("1/2") == 4
    assert F.array([[-1, 8], [14, 3]]).tolist() == [[6, 1], [0, 3]]
    with pytest.raises(ZeroDivisionError):
        F.scalar("1/7")
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    assert F.inv(3) * 3 % 7 == 1


def test_characteristic_guards():
    GF(5).require_char_not(2, 3)
    with pytest.raises(CharacteristicError):
        GF(3).require_char_not(2, 3, what="Jordan products")
    with pytest.raises(CharacteristicError):
        GF(5).require_char_zero("coboundaries")
    GF(5).require_char_zero("coboundaries", override=True)
    QQ.require_char_zero()


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@given(st.lists(fractions, min_size=1, max_size=12))
def test_integerize_roundtrip(vals):
    a = QQ.array(vals)
    ints, scale = QQ.integerize(a)
    assert scale > 0
    assert all(Fraction(int(i), scale) == v for i, v in zip(ints, a))
    assert np.array_equal(QQ.from_integers(ints, scale), a)


@given(
    st.integers(1, 4).flatmap(
        lambda k: st.tuples(
            st.lists(st.lists(fractions, min_size=k, max_size=k), min_size=1, max_size=4),
            st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=k, max_size=k),
        )
    )
)
def test_matmul_matches_fraction_arithmetic(pair):
    a, b = pair
    got = QQ.matmul(QQ.array(a), QQ.array(b))
    want = [[sum((a[i][t] * b[t][j] for t in range(len(b))), Fraction(0)) for j in range(3)] for i in range(len(a))]
    assert got.tolist() == want


def test_integer_rows_preserves_row_space():
    m = QQ.array([[Fraction(1, 2), Fraction(1, 3)], [0, Fraction(5, 7)]])
    r = QQ.integer_rows(m)
    assert r.tolist() == [[3, 2], [0, 5]]
