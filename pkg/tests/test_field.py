"""Field arithmetic: axioms, parsing, conjugation, mode handling."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from willmore.field import (
    CoeffField, Element, FieldError, conj, elem, is_zero, parse_element,
)

D = 30


def rand_elem(draw_ints):
    a, b, c, e = draw_ints
    return Element(Fraction(a, 7), Fraction(b, 5), Fraction(c, 3),
                   Fraction(e, 11), D if (c or e) else 0)


small = st.integers(min_value=-20, max_value=20)
elems = st.tuples(small, small, small, small).map(rand_elem)
nonzero_elems = elems.filter(bool)


@given(elems, elems, elems)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert x + Element(0) == x
    assert x * Element(1) == x
    assert x + (-x) == Element(0)


@given(nonzero_elems)
def test_inverses(x):
    assert x * x.inverse() == Element(1)
    assert (Element(1) / x) * x == Element(1)


@given(elems, nonzero_elems)
def test_division(x, y):
    assert (x / y) * y == x


@given(elems, elems)
def test_conjugation_is_ring_hom(x, y):
    assert conj(x + y) == conj(x) + conj(y)
    assert conj(x * y) == conj(x) * conj(y)
    assert conj(conj(x)) == x


@given(elems)
def test_complex_embedding(x):
    c = complex(x)
    c2 = complex(x * x)
    assert abs(c * c - c2) < 1e-9 * (1 + abs(c2))


@given(elems, st.integers(min_value=0, max_value=6))
def test_powers(x, n):
    expected = Element(1)
    for _ in range(n):
        expected = expected * x
    assert x ** n == expected


def test_sqrt_square():
    s = Element(0, 0, 1, 0, D)
    assert s * s == Element(D)
    assert (s.inverse() * s) == Element(1)


def test_mixed_radicands_rejected():
    a = Element(0, 0, 1, 0, 2)
    b = Element(0, 0, 1, 0, 3)
    with pytest.raises(FieldError):
        a * b


def test_parse_basic():
    assert parse_element("-1/4") == Element(Fraction(-1, 4))
    assert parse_element("i/6") == Element(0, Fraction(1, 6))
    assert parse_element("2i") == Element(0, 2)
    assert parse_element("-i") == Element(0, -1)
    assert parse_element("sqrt30/2") == Element(0, 0, Fraction(1, 2), 0, 30)
    assert parse_element("-3*i*sqrt30/4") == \
        Element(0, 0, 0, Fraction(-3, 4), 30)
    assert parse_element("1/2+i/3") == \
        Element(Fraction(1, 2), Fraction(1, 3))
    assert parse_element("1-i") == Element(1, -1)
    assert parse_element("0") == Element(0)


def test_parse_rejects_garbage():
    for bad in ("", "1//2", "sqrt", "1/0", "i i"):
        with pytest.raises(FieldError):
            parse_element(bad)


def test_parse_radicand_pinning():
    assert parse_element("sqrt30", 30) == Element(0, 0, 1, 0, 30)
    with pytest.raises(FieldError):
        parse_element("sqrt2", 30)


@given(elems)
def test_str_roundtrip(x):
    assert parse_element(str(x), D) == x


def test_field_configuration():
    F = CoeffField(30)
    assert F.is_exact and F.d == 30
    assert F("1/2+i/3") == Element(Fraction(1, 2), Fraction(1, 3))
    assert F.sqrt * F.sqrt == F("30")
    assert F.i * F.i == F("-1")
    with pytest.raises(FieldError):
        CoeffField(12)  # not square-free
    with pytest.raises(FieldError):
        CoeffField(1)
    with pytest.raises(FieldError):
        CoeffField(30, mode="symbolic")


def test_floating_field():
    F = CoeffField(30, mode="floating")
    assert not F.is_exact
    assert isinstance(F("1/2"), complex)
    assert abs(F.sqrt - 30 ** 0.5) < 1e-14
    assert F(0.5 + 0.5j) == 0.5 + 0.5j
    with pytest.raises(FieldError):
        CoeffField(30)(0.5 + 0.5j)


def test_exact_complex_interop():
    x = elem(1, 2)
    assert isinstance(x + 0.5j, complex)
    assert x * 2.0 == 2 + 4j
    assert 1.0 / elem(0, 1) == -1j
    assert 3.0 - elem(1) == 2 + 0j


def test_is_zero():
    assert is_zero(Element(0))
    assert not is_zero(Element(0, 0, 1, 0, 30))
    assert is_zero(1e-15 + 0j, tol=1e-12)
    assert not is_zero(1e-6 + 0j, tol=1e-12)
