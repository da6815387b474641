"""System containers, kind validation, and the text file format."""

import pathlib

import pytest

from odesplit.context import JetContext
from odesplit.errors import FormatError, KindError, OdesplitError, ParseError
from odesplit.expressions import Expression
from odesplit.fileio import (
    parse_generators,
    parse_system,
    print_generators,
    print_system,
    read_generators,
    read_system,
    scalar_to_system,
    system_to_scalar,
    write_system,
)
from odesplit.parsing import parse
from odesplit.systems import (
    SPLIT_KINDS,
    Constraint,
    ConstraintSet,
    DifferentialSystem,
    Equation,
    Generator,
    ScalarODE,
    kind_spec,
)

from conftest import DERIVED, GENS, GOLDEN

ALL_SYSTEM_FILES = sorted(GOLDEN.glob("*.txt")) + sorted(DERIVED.glob("*.txt"))
ALL_GEN_FILES = sorted(GENS.glob("*.txt"))


@pytest.mark.parametrize("path", ALL_SYSTEM_FILES, ids=lambda p: p.name)
def test_system_files_round_trip_byte_identically(path):
    assert print_system(read_system(path)) == path.read_text()


@pytest.mark.parametrize("path", ALL_GEN_FILES, ids=lambda p: p.name)
def test_generator_files_round_trip_byte_identically(path):
    ctx, gens = read_generators(path)
    assert print_generators(gens) == path.read_text()


def test_kind_table_is_complete():
    assert SPLIT_KINDS == (
        "ode2",
        "pde2",
        "ode3",
        "ode3-dual",
        "ode4",
        "pde4x2",
        "pde4x2-dual",
        "pde4x4",
    )
    for name in SPLIT_KINDS:
        spec = kind_spec(name)
        assert spec.name == name
        assert len(spec.deps) in (2, 3, 4)
    with pytest.raises(KindError):
        kind_spec("ode5")


def test_scalar_ode_basics():
    ode = ScalarODE.from_text("u^2/s^5")
    assert ode.indep == "s"
    assert ode.dep == "u"
    assert ode == ScalarODE.from_text("u^2/s^5")
    assert ode != ScalarODE.from_text("0")


def test_scalar_ode_rejects_higher_jets_in_rhs():
    ctx = JetContext(("s",), ("u",))
    upp = Expression.symbol(ctx, "u''")
    with pytest.raises(OdesplitError):
        ScalarODE(ctx, upp)


def test_system_construction_checks_kind_shape():
    ctx = JetContext(("s",), ("p", "q"))
    zero = Expression.constant(ctx, 0)
    eqs = [
        Equation(Expression.symbol(ctx, "p''"), zero),
        Equation(Expression.symbol(ctx, "q''"), zero),
    ]
    sys = DifferentialSystem(ctx, "ode2", eqs)
    assert sys.kind == "ode2"
    assert len(sys.equations) == 2
    with pytest.raises(KindError):
        DifferentialSystem(ctx, "ode2", eqs[:1])  # wrong equation count
    with pytest.raises(KindError):
        DifferentialSystem(ctx, "ode3", eqs)  # wrong dependents for kind


def test_kind_lhs_pattern_enforced():
    ctx = JetContext(("s",), ("p", "q"))
    zero = Expression.constant(ctx, 0)
    bad = [
        Equation(Expression.symbol(ctx, "q''"), zero),  # rows swapped
        Equation(Expression.symbol(ctx, "p''"), zero),
    ]
    with pytest.raises(KindError):
        DifferentialSystem(ctx, "ode2", bad)


def test_generic_kind_allows_any_polynomial_lhs():
    ctx = JetContext(("s",), ("p", "q"))
    lhs = parse("p'' - q'' + p'", ctx)
    sys = DifferentialSystem(
        ctx, "generic", [Equation(lhs, Expression.constant(ctx, 0))]
    )
    assert sys.kind == "generic"


def test_rhs_must_stay_first_order():
    ctx = JetContext(("s",), ("p", "q"))
    eqs = [
        Equation(Expression.symbol(ctx, "p''"), Expression.symbol(ctx, "q''")),
        Equation(Expression.symbol(ctx, "q''"), Expression.constant(ctx, 0)),
    ]
    with pytest.raises(FormatError):
        DifferentialSystem(ctx, "ode2", eqs)


def test_solved_jets_and_rhs_rows():
    sys = read_system(GOLDEN / "four_power.txt")
    solved = sys.solved_jets()
    assert sorted(solved) == ["w''", "x''", "y''", "z''"]
    rows = sys.rhs_rows
    assert solved["w''"] == rows[0]
    assert len(rows) == 4
    ctx = sys.ctx
    w = Expression.symbol(ctx, "w")
    x = Expression.symbol(ctx, "x")
    y = Expression.symbol(ctx, "y")
    z = Expression.symbol(ctx, "z")
    s = Expression.symbol(ctx, "s")
    assert rows[0] == (w * w - x * x - y * y + z * z) / s ** 5


def test_systems_and_parts_are_immutable():
    sys = read_system(GOLDEN / "four_power.txt")
    with pytest.raises(OdesplitError):
        sys.kind = "ode4"
    with pytest.raises(OdesplitError):
        sys.equations[0].lhs = None
    ode = ScalarODE.from_text("0")
    with pytest.raises(OdesplitError):
        ode.rhs = None


def test_constraint_rewrite_replaces_designated_monomial():
    ctx = JetContext(("s",), ("x", "y", "z"))
    z = Expression.symbol(ctx, "z")
    x = Expression.symbol(ctx, "x")
    y = Expression.symbol(ctx, "y")
    con = Constraint(x * x + y * y, z * z)  # z^2 -> x^2 + y^2
    cs = ConstraintSet([con])
    assert cs.rewrite(z * z) == x * x + y * y
    assert cs.rewrite(z * z * z) == (x * x + y * y) * z
    assert cs.rewrite(x + y) == x + y


def test_constraint_validation():
    ctx = JetContext(("s",), ("x", "y", "z"))
    x = Expression.symbol(ctx, "x")
    z = Expression.symbol(ctx, "z")
    with pytest.raises(FormatError):
        Constraint(x, 2 * z)  # designated side must be monic
    with pytest.raises(FormatError):
        Constraint(x, Expression.constant(ctx, 1))  # and non-constant
    with pytest.raises(FormatError):
        Constraint(z * z + x, z * z)  # replacement contains the monomial
    with pytest.raises(FormatError):
        Constraint(1 / x, z)  # must be polynomial


def test_parse_system_requires_headers_in_order():
    good = "indep: s\ndep: u\nkind: generic\neq: u'' = 0\n"
    sys = parse_system(good)
    assert sys.kind == "generic"
    for bad in (
        "dep: u\nindep: s\nkind: generic\neq: u'' = 0\n",
        "indep: s\ndep: u\neq: u'' = 0\n",
        "indep: s\ndep: u\nkind: nosuch\neq: u'' = 0\n",
        "indep: s\ndep: u\nkind: generic\n",
        "indep: s\ndep: u\nkind: generic\neq: u'' == 0\n",
        "indep: s\ndep: u\nkind: generic\nbogus: 1\neq: u'' = 0\n",
    ):
        with pytest.raises((FormatError, KindError, ParseError)):
            parse_system(bad)


def test_constraint_lines_precede_equations():
    text = (
        "indep: s\n"
        "dep: x,y,z\n"
        "kind: generic\n"
        "constraint: x^2 + y^2 = z^2\n"
        "eq: x'' = 0\n"
        "eq: y'' = 0\n"
        "eq: z'' = 0\n"
    )
    sys = parse_system(text)
    assert len(sys.constraints) == 1
    assert print_system(sys) == text
    swapped = text.replace(
        "constraint: x^2 + y^2 = z^2\neq: x'' = 0\n",
        "eq: x'' = 0\nconstraint: x^2 + y^2 = z^2\n",
    )
    with pytest.raises(FormatError):
        parse_system(swapped)


def test_scalar_system_round_trip(tmp_path):
    ode = ScalarODE.from_text("(-s*u^2 - 5*u')/s")
    sys = scalar_to_system(ode)
    assert sys.kind == "generic"
    back = system_to_scalar(sys)
    assert back == ode
    path = tmp_path / "base.txt"
    write_system(sys, path)
    assert system_to_scalar(read_system(path)) == ode


def test_system_to_scalar_rejects_multi_equation_systems():
    sys = read_system(GOLDEN / "four_power.txt")
    with pytest.raises(OdesplitError):
        system_to_scalar(sys)


def test_parse_generators_and_describe():
    text = "indep: s\ndep: u\n\nxi[s] = s\neta[u] = -2*u\n"
    ctx, gens = parse_generators(text)
    assert len(gens) == 1
    assert gens[0].describe() == "s*d_s -2*u*d_u"
    assert print_generators(gens) == text


def test_generator_from_texts_and_apply():
    ctx = JetContext(("s",), ("u",))
    gen = Generator.from_texts(ctx, ("s^2",), ("s*u",))
    assert gen.coefficient("s") == Expression.symbol(ctx, "s") ** 2
    assert not gen.is_zero()
    u = Expression.symbol(ctx, "u")
    s = Expression.symbol(ctx, "s")
    assert gen.apply(u * s) == s * s * u + s * s * u  # xi*du/ds .. eta*du/du


def test_read_system_missing_file_raises(tmp_path):
    with pytest.raises(OSError):
        read_system(tmp_path / "absent.txt")
