"""Commuting-units number system over exact rational expressions."""

import random
from fractions import Fraction

import pytest

from odesplit.bicomplex import (
    BicomplexExpression,
    bicomplex_expand,
    bicomplex_substitute,
)
from odesplit.context import JetContext
from odesplit.errors import ZeroDenominatorError
from odesplit.expressions import Expression


def ctx2():
    return JetContext(("s",), ("u",))


def const(ctx, v):
    return BicomplexExpression.from_real(Expression.constant(ctx, v))


def rand_element(ctx, rng):
    parts = [Expression.constant(ctx, Fraction(rng.randint(-5, 5))) for _ in range(4)]
    e = BicomplexExpression(*parts)
    return e


def test_unit_squares():
    ctx = ctx2()
    one = const(ctx, 1)
    i = BicomplexExpression.unit("i", ctx)
    j = BicomplexExpression.unit("j", ctx)
    ij = BicomplexExpression.unit("ij", ctx)
    assert i * i == -one
    assert j * j == -one
    assert ij * ij == one  # the product unit squares to plus one
    assert i * j == ij
    assert j * i == ij  # units commute


def test_ring_axioms_on_random_elements():
    ctx = ctx2()
    rng = random.Random(5)
    for _ in range(30):
        a = rand_element(ctx, rng)
        b = rand_element(ctx, rng)
        c = rand_element(ctx, rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + BicomplexExpression.zero(ctx) == a
        assert a * const(ctx, 1) == a
        assert (a - a).is_zero()


def test_pair_and_component_round_trip():
    ctx = ctx2()
    re = Expression.symbol(ctx, "s")
    im = Expression.symbol(ctx, "u")
    for tag in ("i", "j", "ij"):
        e = BicomplexExpression.pair(re, im, tag)
        assert e.component("1") == re
        assert e.component(tag) == im


def test_conjugations_flip_their_units():
    ctx = ctx2()
    i = BicomplexExpression.unit("i", ctx)
    j = BicomplexExpression.unit("j", ctx)
    ij = BicomplexExpression.unit("ij", ctx)
    one = const(ctx, 1)
    e = one + i + j + ij
    assert e.conj_i() == one - i + j - ij
    assert e.conj_j() == one + i - j - ij


def test_inverse_of_invertible_element():
    ctx = ctx2()
    rng = random.Random(9)
    one = const(ctx, 1)
    found = 0
    while found < 10:
        a = rand_element(ctx, rng)
        try:
            inv = a.inverse()
        except ZeroDenominatorError:
            continue
        assert a * inv == one
        found += 1


def test_zero_divisors_have_no_inverse():
    # (1 + ij) * (1 - ij) = 0, so both factors sit on the singular cone
    ctx = ctx2()
    one = const(ctx, 1)
    ij = BicomplexExpression.unit("ij", ctx)
    assert ((one + ij) * (one - ij)).is_zero()
    with pytest.raises(ZeroDenominatorError):
        (one + ij).inverse()
    i = BicomplexExpression.unit("i", ctx)
    j = BicomplexExpression.unit("j", ctx)
    with pytest.raises(ZeroDenominatorError):
        (i + j).inverse()


def test_times_unit_matches_multiplication():
    ctx = ctx2()
    rng = random.Random(2)
    a = rand_element(ctx, rng)
    for tag in ("i", "j", "ij"):
        assert a.times_unit(tag) == a * BicomplexExpression.unit(tag, ctx)


def test_power_and_division():
    ctx = ctx2()
    one = const(ctx, 1)
    i = BicomplexExpression.unit("i", ctx)
    e = const(ctx, 2) + i
    assert e ** 0 == one
    assert e ** 3 == e * e * e
    assert (e ** -1) * e == one
    assert (e / e) == one


def test_expand_square_over_one_unit():
    # (x + j*y)^2 splits into x^2 - y^2 and the 2*x*y cross part
    src = JetContext(("s",), ("u",))
    dst = JetContext(("s",), ("x", "y"))
    u2 = Expression.symbol(src, "u") ** 2
    image = bicomplex_expand(u2, {"u": ("j", "x", "y")}, dst)
    x = Expression.symbol(dst, "x")
    y = Expression.symbol(dst, "y")
    assert image.component("1") == x * x - y * y
    assert image.component("j") == 2 * x * y
    assert image.component("i").is_zero()
    assert image.component("ij").is_zero()


def test_substitute_with_denominator():
    src = JetContext(("s",), ("u",))
    dst = JetContext(("s",), ("p", "q"))
    e = Expression.constant(src, 1) / Expression.symbol(src, "u")
    p = Expression.symbol(dst, "p")
    q = Expression.symbol(dst, "q")
    val = BicomplexExpression.pair(p, q, "i")
    image = bicomplex_substitute(e, {"u": val}, dst)
    # 1/(p + i*q) = (p - i*q)/(p^2 + q^2)
    den = p * p + q * q
    assert image.component("1") == p / den
    assert image.component("i") == -q / den
    assert (image * val) == BicomplexExpression.from_real(Expression.constant(dst, 1))


def test_substitute_rejects_singular_denominator():
    src = JetContext(("s",), ("u",))
    dst = JetContext(("s",), ("p", "q"))
    e = Expression.constant(src, 1) / Expression.symbol(src, "u")
    zero = BicomplexExpression.zero(dst)
    with pytest.raises(ZeroDenominatorError):
        bicomplex_substitute(e, {"u": zero}, dst)


def test_free_of():
    ctx = ctx2()
    i = BicomplexExpression.unit("i", ctx)
    j = BicomplexExpression.unit("j", ctx)
    assert (const(ctx, 1) + j).free_of("i")
    assert not (const(ctx, 1) + i).free_of("i")
