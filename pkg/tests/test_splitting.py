"""The splitting recipe: golden images, numeric oracles, operator images.

The oracle here re-implements the commuting-units arithmetic on plain
4-tuples of Fractions, independent of the package's own number type:
slot order (1, i, j, ij) with i^2 = j^2 = -1 and (ij)^2 = +1.
"""

import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from odesplit.context import JetContext
from odesplit.errors import KindError
from odesplit.expressions import Expression, substitute
from odesplit.fileio import print_system, read_system, system_to_scalar
from odesplit.splitting import split, split_generator
from odesplit.systems import SPLIT_KINDS, Generator, ScalarODE, kind_spec

from conftest import DERIVED, GOLDEN

F = Fraction


# -- exact 4-tuple arithmetic (the independent oracle) ---------------------


def qadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def qscale(a, c):
    return tuple(x * c for x in a)


def qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 + a3 * b3,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a2 * b0 - a1 * b3 - a3 * b1,
        a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1,
    )


def qconj_i(a):
    return (a[0], -a[1], a[2], -a[3])


def qconj_j(a):
    return (a[0], a[1], -a[2], -a[3])


def qinv(a):
    m = qmul(a, qconj_i(a))
    norm = qmul(m, qconj_j(m))
    assert norm[1] == norm[2] == norm[3] == 0
    if norm[0] == 0:
        raise ZeroDivisionError("zero divisor")
    return qscale(qmul(qconj_i(a), qconj_j(m)), F(1) / norm[0])


def qdiv(a, b):
    return qmul(a, qinv(b))


def qconst(c):
    return (F(c), F(0), F(0), F(0))


UNITS = {
    "1": (F(1), F(0), F(0), F(0)),
    "i": (F(0), F(1), F(0), F(0)),
    "j": (F(0), F(0), F(1), F(0)),
    "ij": (F(0), F(0), F(0), F(1)),
}
SLOT = {"1": 0, "i": 1, "j": 2, "ij": 3}


def test_oracle_arithmetic_self_check():
    i, j, ij = UNITS["i"], UNITS["j"], UNITS["ij"]
    assert qmul(i, i) == qconst(-1)
    assert qmul(j, j) == qconst(-1)
    assert qmul(ij, ij) == qconst(1)
    assert qmul(i, j) == ij
    a = (F(2), F(3), F(-1), F(5))
    assert qmul(a, qinv(a)) == qconst(1)


# -- golden split images ----------------------------------------------------


GOLDEN_SPLITS = [
    ("base_power.txt", "ode4", GOLDEN / "four_power.txt"),
    ("base_emden.txt", "ode4", GOLDEN / "four_emden.txt"),
    ("base_emden.txt", "pde4x2", GOLDEN / "emden_pde4x2.txt"),
    ("base_free.txt", "pde4x2", GOLDEN / "free_pde4x2.txt"),
    ("base_power.txt", "ode3", DERIVED / "three_power_recipe.txt"),
    ("base_emden.txt", "ode3", DERIVED / "three_emden_recipe.txt"),
    ("base_emden.txt", "ode2", DERIVED / "emden_ode2.txt"),
    ("base_emden.txt", "pde4x4", DERIVED / "emden_pde4x4_recipe.txt"),
]


@pytest.mark.parametrize(
    "base_name,variant,expect", GOLDEN_SPLITS, ids=lambda v: getattr(v, "name", v)
)
def test_split_matches_golden_files(base_name, variant, expect):
    base = system_to_scalar(read_system(GOLDEN / base_name))
    result = split(base, variant)
    assert result.system == read_system(expect)
    assert print_system(result.system) == expect.read_text()


@pytest.mark.parametrize("variant", SPLIT_KINDS)
def test_free_equation_splits_to_zero_rhs(variant):
    result = split(ScalarODE.from_text("0"), variant)
    assert all(r.is_zero() for r in result.system.rhs_rows)
    name = "free_%s.txt" % variant.replace("-", "_")
    for root in (DERIVED, GOLDEN):
        path = root / name
        if path.exists():
            break
    else:
        path = GOLDEN / ("free_%s.txt" % variant)
    assert print_system(result.system) == path.read_text()


def test_three_component_projection_residuals_frozen():
    power = split(ScalarODE.from_text("u^2/s^5"), "ode3")
    from odesplit.parsing import to_text

    assert [to_text(r) for r in power.residuals] == [
        "(y^2 - z^2)/s^5",
        "2*y*z/s^5",
    ]
    emden = split(ScalarODE.from_text("(-s*u^2 - 5*u')/s"), "ode3")
    assert [to_text(r) for r in emden.residuals] == ["-y^2 + z^2", "-2*y*z"]
    assert split(ScalarODE.from_text("u^2/s^5"), "ode4").residuals == ()


def test_split_records_substitution_and_guarantee():
    r = split(ScalarODE.from_text("u^2/s^5"), "ode4")
    assert r.substitution == (
        "u -> w + i*y + j*x + ij*z",
        "u' -> w' + i*y' + j*x' + ij*z'",
    )
    assert r.guaranteed.verdict is True
    with pytest.raises(KindError):
        split(ScalarODE.from_text("0"), "ode5")


# -- pointwise equivalence with the oracle ----------------------------------


INDEP_SLOTS = {
    "ode2": {"s": "1"},
    "pde2": {"s": "1", "t": "i"},
    "ode4": {"s": "1"},
    "pde4x2": {"s": "1", "t": "j"},
    "pde4x2-dual": {"s": "1", "t": "i"},
    "pde4x4": {"s": "1", "t": "j", "u": "i", "v": "ij"},
}
DEP_SLOTS = {
    "ode2": {"p": "1", "q": "i"},
    "pde2": {"p": "1", "q": "i"},
    "ode4": {"w": "1", "x": "j", "y": "i", "z": "ij"},
    "pde4x2": {"w": "1", "x": "j", "y": "i", "z": "ij"},
    "pde4x2-dual": {"w": "1", "x": "j", "y": "i", "z": "ij"},
    "pde4x4": {"w": "1", "x": "j", "y": "i", "z": "ij"},
}
FACTORS = {
    "ode2": 1,
    "pde2": 4,
    "ode4": 1,
    "pde4x2": 4,
    "pde4x2-dual": 4,
    "pde4x4": 16,
}

SAMPLE_BASES = {
    "power": (
        "u^2/s^5",
        lambda sq, uq, vq: qdiv(qmul(uq, uq), qmul(qmul(sq, sq), qmul(sq, qmul(sq, sq)))),
    ),
    "radial": (
        "(-s*u^2 - 5*u')/s",
        lambda sq, uq, vq: qadd(qscale(qmul(uq, uq), F(-1)), qscale(qdiv(vq, sq), F(-5))),
    ),
    "mixed": (
        "(u*u' + s)/2",
        lambda sq, uq, vq: qscale(qadd(qmul(uq, vq), sq), F(1, 2)),
    ),
}


def point_env(system, variant, rng):
    """Random point plus consistent jet values; returns (env, sq, uq, vq)."""
    ind_slots = INDEP_SLOTS[variant]
    dep_slots = DEP_SLOTS[variant]
    ctx = system.ctx

    def rand():
        return F(rng.randint(1, 9), rng.randint(1, 4))

    sq = [F(0)] * 4
    for name, unit in ind_slots.items():
        sq[SLOT[unit]] = rand()
    sq = tuple(sq)
    uq = tuple(rand() for _ in range(4))
    vq = tuple(rand() for _ in range(4))
    if len(dep_slots) == 2:
        uq = (uq[0], uq[1], F(0), F(0))
        vq = (vq[0], vq[1], F(0), F(0))
    env = {}
    for name, unit in ind_slots.items():
        env[name] = sq[SLOT[unit]]
    for dep, unit in dep_slots.items():
        env[dep] = uq[SLOT[dep_slots[dep]]]
        for ind in ctx.independents:
            # d/d(ind) acts as multiplication by the direction's unit
            dval = qmul(UNITS[ind_slots[ind]], vq)
            env[ctx.jet(dep, (ind,))] = dval[SLOT[unit]]
    return env, sq, uq, vq


@pytest.mark.parametrize("variant", sorted(INDEP_SLOTS))
@pytest.mark.parametrize("base_key", sorted(SAMPLE_BASES))
def test_rhs_rows_match_oracle_at_random_points(variant, base_key):
    text, oracle = SAMPLE_BASES[base_key]
    system = split(ScalarODE.from_text(text), variant).system
    dep_slots = DEP_SLOTS[variant]
    factor = FACTORS[variant]
    rng = random.Random(hash((variant, base_key)) & 0xFFFF)
    checked = 0
    tries = 0
    while checked < 12 and tries < 60:
        tries += 1
        env, sq, uq, vq = point_env(system, variant, rng)
        try:
            expect = qscale(oracle(sq, uq, vq), F(factor))
        except ZeroDivisionError:
            continue
        try:
            rows = [r.evaluate(env) for r in system.rhs_rows]
        except Exception:
            continue
        for dep, row_val in zip(system.ctx.dependents, rows):
            assert row_val == expect[SLOT[dep_slots[dep]]]
        checked += 1
    assert checked >= 8


@pytest.mark.parametrize("variant", sorted(INDEP_SLOTS))
def test_lhs_combinations_read_off_second_derivative(variant):
    """LHS rows equal factor * component of u'' at consistent jet values."""
    system = split(ScalarODE.from_text("0"), variant).system
    ctx = system.ctx
    ind_slots = INDEP_SLOTS[variant]
    dep_slots = DEP_SLOTS[variant]
    factor = FACTORS[variant]
    rng = random.Random(31)
    for _ in range(10):
        env, sq, uq, vq = point_env(system, variant, rng)
        wq = tuple(F(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(4))
        if len(dep_slots) == 2:
            wq = (wq[0], wq[1], F(0), F(0))
        for dep, unit in dep_slots.items():
            for pair in combinations_with_replacement(ctx.independents, 2):
                uu = qmul(UNITS[ind_slots[pair[0]]], UNITS[ind_slots[pair[1]]])
                env[ctx.jet(dep, pair)] = qmul(uu, wq)[SLOT[unit]]
        for dep, eq in zip(ctx.dependents, system.equations):
            assert eq.lhs.evaluate(env) == factor * wq[SLOT[dep_slots[dep]]]


# -- polynomial solutions carry over ----------------------------------------


@pytest.mark.parametrize("variant", ("pde2", "pde4x2", "pde4x2-dual", "pde4x4"))
@pytest.mark.parametrize("rhs_text,power", [("2", 2), ("6*s", 3)])
def test_polynomial_solutions_satisfy_split_systems(variant, rhs_text, power):
    """u = sigma^n solves u'' = n(n-1) sigma^(n-2); its components must
    solve the split system exactly."""
    system = split(ScalarODE.from_text(rhs_text), variant).system
    ctx = system.ctx
    ind_slots = INDEP_SLOTS[variant]
    dep_slots = DEP_SLOTS[variant]
    zero = Expression.constant(ctx, 0)
    sigma = [zero] * 4
    for name, unit in ind_slots.items():
        sigma[SLOT[unit]] = Expression.symbol(ctx, name)
    value = (Expression.constant(ctx, 1), zero, zero, zero)
    for _ in range(power):
        value = qmul(tuple(sigma), value)
    bind = {}
    for dep, unit in dep_slots.items():
        f = value[SLOT[unit]]
        bind[dep] = f
        for order in (1, 2):
            for multi in combinations_with_replacement(ctx.independents, order):
                g = f
                for ind in multi:
                    g = g.diff_partial(ind)
                bind[ctx.jet(dep, multi)] = g
    for eq in system.equations:
        gap = eq.lhs - eq.rhs
        bound = {k: v for k, v in bind.items() if k in gap.symbols()}
        assert substitute(gap, bound).is_zero()


# -- operator images ---------------------------------------------------------


def scaling_pair_images():
    ctx = JetContext(("s",), ("u",))
    return Generator.from_texts(ctx, ("s",), ("3*u",))


def test_generator_images_per_variant():
    gen = scaling_pair_images()
    assert [g.describe() for g in split_generator(gen, "ode2")] == [
        "s*d_s + 3*p*d_p + 3*q*d_q",
        "-3*q*d_p + 3*p*d_q",
    ]
    assert [g.describe() for g in split_generator(gen, "ode4")] == [
        "s*d_s + 3*w*d_w + 3*x*d_x + 3*y*d_y + 3*z*d_z",
        "-3*y*d_w -3*z*d_x + 3*w*d_y + 3*x*d_z",
        "-3*x*d_w + 3*w*d_x -3*z*d_y + 3*y*d_z",
        "3*z*d_w -3*y*d_x -3*x*d_y + 3*w*d_z",
    ]
    assert [g.describe() for g in split_generator(gen, "pde2")] == [
        "s*d_s + t*d_t + 3*p*d_p + 3*q*d_q",
        "-t*d_s + s*d_t -3*q*d_p + 3*p*d_q",
    ]


def test_generator_images_tag_imaginary_axes():
    gen = scaling_pair_images()
    images = split_generator(gen, "ode3-dual")
    assert all(img.imag_deps == frozenset({"z"}) for img in images)
    descriptions = [g.describe() for g in images]
    assert "s*d_s + 3*x*d_x + 3*y*d_y + 3*z*d_z[imag]" in descriptions
    plain = split_generator(gen, "ode3")
    assert all(img.imag_deps == frozenset() for img in plain)
    assert len(plain) == 4
