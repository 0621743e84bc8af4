from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from qaffine.scalars import (
    CLASSICAL,
    GENERIC,
    I,
    NEGATED,
    ONE,
    V,
    ZERO,
    Gauss,
    PoleError,
    Scalar,
    classical_limit,
    evaluate,
    parse_scalar,
    qbracket,
    qpow,
    render,
)


@st.composite
def laurents(draw, max_terms=4):
    terms = draw(st.dictionaries(st.integers(-5, 5), st.integers(-6, 6), max_size=max_terms))
    return Scalar.laurent(terms)


@st.composite
def scalars(draw):
    num = draw(laurents())
    den = draw(laurents())
    if not den:
        den = ONE
    return num / den


@st.composite
def gaussian_scalars(draw):
    re_, im = draw(laurents()), draw(laurents())
    return re_ + im * Scalar.const(I)


# --- documented examples ------------------------------------------------------


def test_qpow_examples():
    assert qpow(0) == ONE
    assert qpow(Fraction(1, 2)) == V
    assert qpow(-2) == Scalar.monomial(-4)


def test_qpow_rejects_quarter():
    with pytest.raises(ValueError):
        qpow(Fraction(1, 4))


def test_qbracket_examples():
    assert qbracket(1, 1) == ONE
    assert qbracket(2, 1) == Scalar.laurent({2: 1, -2: 1})
    v = V
    expected = (v - v.inverse()) / (v**2 - v**-2)
    assert qbracket(Fraction(1, 2), 1) == expected
    assert render(qbracket(Fraction(1, 2), 1)) == "(v)/(v^2 + 1)"


def test_qbracket_is_odd_and_zero_at_zero():
    assert qbracket(0, 2) == ZERO
    for a in (Fraction(1, 2), 1, Fraction(3, 2), 3):
        for eps in (1, 2):
            assert qbracket(-a, eps) == -qbracket(a, eps)


def test_evaluate_examples():
    assert evaluate(Scalar.laurent({2: 1, -2: 1}), 1) == 2
    assert evaluate(qbracket(2, 1), 2) == mpq(17, 4)
    with pytest.raises(PoleError):
        evaluate(ONE / (V - 1), 1)


def test_classical_limit_examples():
    assert classical_limit(qbracket(3, 1)) == 3
    assert classical_limit(qbracket(1, 2)) == mpq(1, 2)
    assert classical_limit(qpow(Fraction(5, 2))) == 1


def test_evaluate_at_i():
    # q = v^2 = -1 at v = i
    assert evaluate(qpow(1), I) == -1
    assert evaluate(qpow(Fraction(1, 2)), I) == I


def test_negated_param():
    # q = -v^2: q^(1/2) = i v
    assert NEGATED.qpow(Fraction(1, 2)) == V * Scalar.const(I)
    assert NEGATED.qpow(1) == -(V**2)
    assert NEGATED.qbracket(2, 1) == -qbracket(2, 1)
    assert NEGATED.qbracket(1, 1) == ONE
    assert NEGATED.qbracket(1, 2) == -qbracket(1, 2)
    assert CLASSICAL.qbracket(Fraction(3, 2), 1) == Scalar.const(Fraction(3, 2))


@given(a=st.integers(-8, 8).map(lambda k: Fraction(k, 2)), eps=st.sampled_from([1, 2]))
def test_negated_bracket_matches_definition(a, eps):
    q = NEGATED.qpow
    direct = (q(a) - q(-a)) / (q(eps) - q(-eps))
    assert NEGATED.qbracket(a, eps) == direct


@given(a=st.integers(-8, 8).map(lambda k: Fraction(k, 2)), eps=st.sampled_from([1, 2]))
def test_generic_bracket_matches_definition(a, eps):
    direct = (qpow(a) - qpow(-a)) / (qpow(eps) - qpow(-eps))
    assert qbracket(a, eps) == direct == GENERIC.qbracket(a, eps)


# --- field axioms -------------------------------------------------------------


@given(scalars(), scalars(), scalars())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(scalars())
@settings(max_examples=60, deadline=None)
def test_inverse(a):
    if a:
        assert a * a.inverse() == ONE
        assert (a / a) == ONE


@given(scalars(), scalars())
@settings(max_examples=60, deadline=None)
def test_equality_is_canonical(a, b):
    """Equal values have equal hashes and identical canonical data."""
    if not b:
        return
    d = a * b / b
    assert d == a
    assert hash(d) == hash(a)
    assert (d.num, d.shift, d.den) == (a.num, a.shift, a.den)


@given(scalars())
@settings(max_examples=60, deadline=None)
def test_canonical_invariants(a):
    if a:
        assert a.num[0] != 0
        assert a.den[0] == 1


@given(gaussian_scalars(), gaussian_scalars())
@settings(max_examples=40, deadline=None)
def test_gaussian_arithmetic(a, b):
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(scalars(), st.integers(2, 9))
@settings(max_examples=40, deadline=None)
def test_evaluation_is_a_homomorphism(a, v0):
    b = a * a + ONE
    try:
        x = evaluate(a, v0)
        y = evaluate(b, v0)
    except PoleError:
        return
    assert y == x * x + 1


@given(st.one_of(scalars(), gaussian_scalars()))
@settings(max_examples=80, deadline=None)
def test_render_parse_roundtrip(a):
    assert parse_scalar(render(a)) == a


def test_parse_examples():
    assert parse_scalar("v^2 + v^-2") == qbracket(2, 1)
    assert parse_scalar("2*v - 1/2") == V * 2 - Scalar.const(Fraction(1, 2))
    assert parse_scalar("(1 + i)*v") == V * Scalar.const(Gauss(1, 1))
    assert parse_scalar("0") == ZERO


def test_constant_hash_matches_rational():
    assert hash(Scalar.const(3)) == hash(mpq(3))
    assert Scalar.const(3) == 3


# --- independent oracle: sympy rational functions -----------------------------

sympy = pytest.importorskip("sympy")
_v = sympy.Symbol("v")


def to_sympy(s: Scalar):
    num = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * _v ** (s.shift + k) for k, c in enumerate(s.num))
    den = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * _v**k for k, c in enumerate(s.den))
    return num / den


@given(scalars(), scalars(), scalars())
@settings(max_examples=30, deadline=None)
def test_arithmetic_against_sympy(a, b, c):
    expr = a * b + c
    if b:
        expr = expr / b
    ref = to_sympy(a) * to_sympy(b) + to_sympy(c)
    if b:
        ref = ref / to_sympy(b)
    assert sympy.cancel(to_sympy(expr) - ref) == 0


def test_qbracket_against_sympy():
    for twice in range(-6, 7):
        for eps in (1, 2):
            # q^a = v^(2a)
            ref = (_v**twice - _v**-twice) / (_v ** (2 * eps) - _v ** (-2 * eps))
            assert sympy.cancel(to_sympy(qbracket(Fraction(twice, 2), eps)) - ref) == 0
