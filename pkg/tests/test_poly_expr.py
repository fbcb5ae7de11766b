from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from graphprop import expr, poly

coeffs = st.lists(st.integers(-20, 20), max_size=6).map(lambda c: poly.trim(tuple(Fraction(x) for x in c)))


def test_trim_and_degree():
    assert poly.trim((1, 2, 0, 0)) == (1, 2)
    assert poly.degree(()) == -1
    assert poly.degree((0, 0, 3)) == 2


def test_to_str():
    assert poly.to_str((Fraction(1), Fraction(-1, 2), Fraction(3)), "x") == "3*x^2-1/2*x+1"
    assert poly.to_str((), "x") == "0"


@given(coeffs, coeffs)
def test_divmod_identity(a, b):
    if not b:
        return
    q, r = poly.divmod_(a, b)
    assert poly.add(poly.mul(q, b), r) == a
    assert poly.degree(r) < poly.degree(b)


@given(coeffs, coeffs)
def test_ext_gcd_bezout(a, b):
    g, s, t = poly.ext_gcd(a, b)
    assert poly.add(poly.mul(s, a), poly.mul(t, b)) == g
    if g:
        assert poly.divmod_(a, g)[1] == () and poly.divmod_(b, g)[1] == ()


def test_irreducibility_small():
    assert poly.is_irreducible_small((-1, 0, 1, 1))  # x^3 + x^2 - 1
    assert not poly.is_irreducible_small((-1, 0, 1))  # x^2 - 1
    assert not poly.is_irreducible_small((4, 0, 0, 0, 1))  # x^4 + 4 = (x^2+2x+2)(x^2-2x+2)


def _q_ops():
    return {
        "add": lambda a, b: a + b, "sub": lambda a, b: a - b, "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b, "neg": lambda a: -a, "pow": lambda a, n: a ** n,
        "int": Fraction, "dec": Fraction, "name": lambda n: Fraction(7),
    }


@pytest.mark.parametrize("text,value", [
    ("1+2*3", 7), ("(1+2)*3", 9), ("2^-1", Fraction(1, 2)), ("−3/6", Fraction(-1, 2)),
    ("2x", 14), ("-x^2", -49), ("0.25", Fraction(1, 4)),
])
def test_expression_grammar(text, value):
    assert expr.evaluate(text, _q_ops()) == value


@pytest.mark.parametrize("text", ["", "1+", "(1", "1)", "2**3", "@"])
def test_expression_errors(text):
    with pytest.raises(expr.ExprError):
        expr.evaluate(text, _q_ops())
