import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jensenop.errors import DomainError, ParseError, UnknownIdentifierError
from jensenop.expr import (Add, Const, Cos, Exp, Log, Mul, Neg, Pow, Sin, Sub, Var,
                           depends_on_x, differentiate, evaluate, parse, to_text)

X = Var()


def test_parse_builds_expected_tree():
    assert parse("x^2 + 3*x") == Add(Pow(X, Const(2.0)), Mul(Const(3.0), X))
    assert parse("sin(x)") == Sin(X)
    assert parse("-log(x)") == Neg(Log(X))


def test_unary_minus_binds_looser_than_power():
    assert parse("-x^2") == Neg(Pow(X, Const(2.0)))
    assert evaluate(parse("-x^2"), 3.0) == -9.0


def test_power_is_right_associative():
    assert parse("2^3^2") == Pow(Const(2.0), Pow(Const(3.0), Const(2.0)))
    assert evaluate(parse("2^3^2"), 0.0) == 512.0


def test_left_associative_subtraction_and_division():
    assert evaluate(parse("10 - 4 - 3"), 0.0) == 3.0
    assert evaluate(parse("16 / 4 / 2"), 0.0) == 2.0


def test_scientific_notation():
    assert evaluate(parse("1.5e-3*x"), 2.0) == pytest.approx(3e-3)
    assert evaluate(parse(".5 + 2."), 0.0) == 2.5


def test_named_constants_are_not_part_of_the_grammar():
    with pytest.raises(UnknownIdentifierError):
        parse("pi")


def test_parse_error_offset_at_end():
    with pytest.raises(ParseError) as info:
        parse("x +")
    assert info.value.offset == 3


def test_parse_error_unbalanced():
    with pytest.raises(ParseError):
        parse("sin(x")
    with pytest.raises(ParseError):
        parse("x)")
    with pytest.raises(ParseError):
        parse("")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("tan(x)")
    assert info.value.offset == 0
    with pytest.raises(UnknownIdentifierError):
        parse("x + y")


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate(parse("log(x)"), 0.0)
    with pytest.raises(DomainError):
        evaluate(parse("1/x"), 0.0)
    with pytest.raises(DomainError):
        evaluate(parse("x^0.5"), -1.0)
    with pytest.raises(DomainError):
        evaluate(parse("exp(x)"), 1e4)


def test_negative_base_integral_exponent():
    assert evaluate(parse("x^3"), -2.0) == -8.0
    assert evaluate(parse("x^4"), -1.0) == 1.0


def test_derivative_oracles():
    assert differentiate(Sin(X)) == Cos(X)
    assert differentiate(Const(5.0)) == Const(0.0)
    d2 = differentiate(differentiate(parse("-log(x)")))
    assert evaluate(d2, 3.0) == pytest.approx(1.0 / 9.0, rel=1e-15)
    assert evaluate(differentiate(parse("x^4")), 2.0) == pytest.approx(32.0)
    assert evaluate(differentiate(parse("x^x")), 2.0) == pytest.approx(4.0 * (math.log(2.0) + 1.0))


def test_depends_on_x():
    assert depends_on_x(parse("sin(x) + 1"))
    assert not depends_on_x(parse("sin(3) + 1"))


@pytest.mark.parametrize("text", [
    "x^2 + 3*x", "-x^2", "(-x)^2", "x - (x - 1)", "x / (x * 2)", "2^3^2", "(2^3)^2",
    "-(x + 1)", "exp(-x) * sin(2*x)", "x - -x", "1 / x / x", "-log(x)",
])
def test_to_text_round_trip(text):
    e = parse(text)
    assert parse(to_text(e)) == e


def _fd(fn, x, h=1e-6):
    return (fn(x + h) - fn(x - h)) / (2 * h)


# one expression per derivative rule; each checked at 100 random points
RULES = {
    "const": ("3", (-2.0, 2.0)),
    "var": ("x", (-2.0, 2.0)),
    "add": ("x + x^2", (-2.0, 2.0)),
    "sub": ("x^3 - x", (-2.0, 2.0)),
    "mul": ("x * sin(x)", (-2.0, 2.0)),
    "div": ("sin(x) / (x^2 + 1)", (-2.0, 2.0)),
    "pow_const": ("x^5", (-2.0, 2.0)),
    "pow_general": ("x^x", (0.5, 2.0)),
    "pow_const_base": ("2^x", (-2.0, 2.0)),
    "neg": ("-cos(x)", (-2.0, 2.0)),
    "exp": ("exp(2*x)", (-2.0, 2.0)),
    "log": ("log(x^2 + 1)", (-2.0, 2.0)),
    "sin": ("sin(x^2)", (-2.0, 2.0)),
    "cos": ("cos(3*x)", (-2.0, 2.0)),
}


@pytest.mark.parametrize("rule", sorted(RULES))
def test_derivative_matches_finite_difference(rule):
    text, (lo, hi) = RULES[rule]
    e = parse(text)
    de = differentiate(e)
    rng = random.Random(rule)
    for _ in range(100):
        x = rng.uniform(lo, hi)
        fd = _fd(lambda t: evaluate(e, t), x)
        exact = evaluate(de, x)
        assert abs(exact - fd) <= 1e-5 * (1 + abs(exact)), (rule, x, exact, fd)


# parsed trees never hold negative literals
_leaf = st.one_of(st.just(X), st.integers(0, 5).map(lambda n: Const(float(n))))
_tree = st.recursive(
    _leaf,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from([Add, Sub, Mul]), kids, kids).map(lambda t: t[0](t[1], t[2])),
        st.tuples(st.sampled_from([Neg, Sin, Cos]), kids).map(lambda t: t[0](t[1])),
    ),
    max_leaves=8,
)


@settings(max_examples=200, deadline=None)
@given(_tree)
def test_round_trip_property(e):
    assert parse(to_text(e)) == e


@settings(max_examples=200, deadline=None)
@given(_tree, st.floats(-2.0, 2.0))
def test_derivative_property(e, x):
    de = differentiate(e)
    try:
        exact = evaluate(de, x)
        fd = _fd(lambda t: evaluate(e, t), x, 1e-5)
    except DomainError:
        return
    assert abs(exact - fd) <= 1e-4 * (1 + abs(exact))
