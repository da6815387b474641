"""Exact rational expressions: canonical forms, calculus, parsing."""

import random
from fractions import Fraction

import pytest

from odesplit.context import JetContext
from odesplit.errors import (
    JetOrderError,
    OdesplitError,
    ParseError,
    PoleError,
    ZeroDenominatorError,
)
from odesplit.expressions import (
    Expression,
    equals,
    substitute,
    total_derivative,
)
from odesplit.parsing import parse, to_text


def ode_ctx():
    return JetContext(("s",), ("u",))


def sym(ctx, name):
    return Expression.symbol(ctx, name)


def test_constant_arithmetic_is_exact():
    ctx = ode_ctx()
    a = Expression.constant(ctx, Fraction(1, 3))
    b = Expression.constant(ctx, Fraction(1, 6))
    assert (a + b).constant_value() == Fraction(1, 2)
    assert (a * b).constant_value() == Fraction(1, 18)
    assert (a - 2 * b).constant_value() == 0
    assert (a / b).constant_value() == 2


def test_sum_of_opposites_cancels_to_zero():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    e = s * u - u * s
    assert e.is_zero()
    assert to_text(e) == "0"


def test_common_polynomial_factor_cancels():
    # (s^2 - u^2)/(s - u) must reduce to s + u
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    e = (s * s - u * u) / (s - u)
    assert e == s + u


def test_denominator_is_monic():
    # denominators carry leading coefficient 1; content moves up top
    ctx = ode_ctx()
    s = sym(ctx, "s")
    assert to_text(1 / (2 - 2 * s)) == "-1/2/(s - 1)"
    assert to_text(1 / (-s)) == "-1/s"


def test_planted_gcd_cancels_exactly():
    """Products with a planted common factor reduce to the cofactor ratio."""
    rng = random.Random(7)
    ctx = JetContext(("s", "t"), ("p", "q"))
    names = ["s", "t", "p", "q"]

    def rand_poly():
        e = Expression.constant(ctx, rng.randint(1, 4))
        for _ in range(rng.randint(1, 3)):
            term = Expression.constant(ctx, rng.randint(-3, 3))
            for _ in range(rng.randint(0, 3)):
                term = term * sym(ctx, rng.choice(names))
            e = e + term
        return e

    for _ in range(25):
        g = rand_poly()
        a = rand_poly()
        b = rand_poly()
        if g.is_zero() or b.is_zero() or (b * g).is_zero():
            continue
        assert (a * g) / (b * g) == a / b


def test_pow_and_negative_pow():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    assert (s + 1) ** 2 == s * s + 2 * s + 1
    assert s ** -2 == 1 / (s * s)
    assert (s ** 0).constant_value() == 1
    with pytest.raises(OdesplitError):
        s ** Fraction(1, 2)


def test_division_by_zero_expression_raises():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    zero = s - s
    with pytest.raises(ZeroDenominatorError):
        s / zero
    with pytest.raises(ZeroDenominatorError):
        zero ** -1


def test_diff_partial_product_and_quotient():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    e = (s * s * u) / (u + 1)
    # d/ds : 2*s*u/(u+1)
    assert e.diff_partial("s") == 2 * s * u / (u + 1)
    # d/du : s^2/(u+1)^2 by the quotient rule
    assert e.diff_partial("u") == s * s / ((u + 1) * (u + 1))


def test_total_derivative_chains_through_jets():
    ctx = ode_ctx()
    u = sym(ctx, "u")
    up = sym(ctx, "u'")
    e = u * u
    assert total_derivative(e, "s") == 2 * u * up


def test_total_derivative_skips_parameters():
    ctx = ode_ctx()
    ctx.add_parameter("a")
    a = sym(ctx, "a")
    s = sym(ctx, "s")
    e = a * s
    assert total_derivative(e, "s") == a
    assert total_derivative(a, "s").is_zero()


def test_total_derivative_of_highest_public_jet():
    # u'' is the top public jet; one internal extra order absorbs u'''
    ctx = ode_ctx()
    upp = sym(ctx, "u''")
    d = total_derivative(upp, "s")
    assert not d.is_zero()
    assert to_text(d) != to_text(upp)


def test_substitute_basic_and_pole():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    e = u / (s - 1)
    assert substitute(e, {"u": s * s}) == s * s / (s - 1)
    assert substitute(e, {"s": 2, "u": 6}).constant_value() == 6
    with pytest.raises(PoleError):
        substitute(e, {"s": 1})


def test_substitute_into_another_context():
    src = ode_ctx()
    dst = JetContext(("s",), ("x", "y"))
    u = sym(src, "u")
    x = sym(dst, "x")
    y = sym(dst, "y")
    image = substitute(u * u, {"u": x + y, "s": sym(dst, "s")}, out_ctx=dst)
    assert image == (x + y) ** 2


def test_parse_respects_precedence_and_unary_minus():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    assert parse("-s^2", ctx) == -(s ** 2)
    assert parse("2*s + u^2*s", ctx) == 2 * s + u * u * s
    assert parse("(s + u)/(s - u)", ctx) == (s + u) / (s - u)
    assert parse("s - u - u", ctx) == s - 2 * u
    assert parse("2^3", ctx).constant_value() == 8


def test_parse_jet_names():
    ctx = JetContext(("s", "t"), ("w", "x"))
    assert parse("w_st", ctx) == sym(ctx, "w_st")
    with pytest.raises(ParseError):
        parse("w_ts", ctx)  # multi-indices must come sorted
    ode = ode_ctx()
    assert parse("u''", ode) == sym(ode, "u''")


def test_print_parse_round_trip_is_identity():
    ctx = JetContext(("s", "t"), ("w", "x"))
    texts = [
        "0",
        "1/2",
        "w_s + x_t",
        "(w^2 - x^2)/(s^2 + t^2)",
        "-2*w*x/(s^2 + t^2)^0 - 1",
        "s*w_st - t*x_ss/3",
    ]
    for text in texts:
        e = parse(text, ctx)
        assert parse(to_text(e), ctx) == e


def test_parse_rejects_malformed_input():
    ctx = ode_ctx()
    for bad in ("", "s +", "(s", "s ** 2", "v", "u'''", "2..5", "s u"):
        with pytest.raises((ParseError, JetOrderError)):
            parse(bad, ctx)


def test_jet_order_limit_enforced():
    # the parser reports the violation with position info
    ctx = ode_ctx()
    with pytest.raises(ParseError, match="order 3 exceeds maximum 2"):
        parse("u'''", ctx)
    with pytest.raises(JetOrderError):
        ctx.jet("u", ("s", "s", "s", "s"))


def test_equals_helper_matches_structural_equality():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    u = sym(ctx, "u")
    assert equals((s + u) ** 2, s * s + 2 * s * u + u * u)
    assert not equals(s, u)


def test_mixing_contexts_raises():
    a = ode_ctx()
    b = JetContext(("s",), ("x", "y"))
    with pytest.raises(OdesplitError):
        sym(a, "u") + sym(b, "x")


def test_expressions_are_immutable():
    ctx = ode_ctx()
    s = sym(ctx, "s")
    with pytest.raises(OdesplitError):
        s.num = {}
