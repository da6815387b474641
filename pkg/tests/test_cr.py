"""Exactness conditions, dependence audit, and base reconstruction."""

import json

import pytest

from odesplit.cr import (
    check_cr,
    check_derivative_dependence,
    full_report,
    reconstruct_base,
)
from odesplit.errors import KindError, VerdictError
from odesplit.fileio import parse_system, read_system, system_to_scalar
from odesplit.splitting import split
from odesplit.systems import SPLIT_KINDS, ScalarODE, kind_spec

from conftest import DERIVED, GOLDEN

PDE_KINDS = ("pde2", "pde4x2", "pde4x2-dual", "pde4x4")

CONDITION_IDS = {
    "ode2": ["dep.1", "dep.2", "vel.1", "vel.2"],
    "pde2": ["sol.1", "sol.2", "indep.1", "indep.2", "dep.1", "dep.2"],
    "ode3": ["dep.1", "dep.2", "vel.1", "vel.2"],
    "ode3-dual": ["dep.1", "dep.2", "vel.1", "vel.2"],
    "ode4": ["dep.%d" % k for k in (1, 2, 3, 4)]
    + ["vel.%d" % k for k in (1, 2, 3, 4)],
    "pde4x2": ["sol.%d" % k for k in (1, 2, 3, 4)]
    + ["dep.%d" % k for k in range(1, 9)],
    "pde4x2-dual": ["sol.%d" % k for k in (1, 2, 3, 4)]
    + ["dep.%d" % k for k in (1, 2, 3, 4)],
    "pde4x4": ["sol.%d" % k for k in (1, 2, 3, 4)]
    + ["indep.%d" % k for k in (1, 2, 3, 4)]
    + ["dep.%d" % k for k in (1, 2, 3, 4)],
}

KIND_DEVIATIONS = {
    "ode2": [],
    "pde2": [],
    "ode3": [],
    "ode3-dual": ["dep.1", "dep.2", "vel.1", "vel.2"],
    "ode4": [],
    "pde4x2": ["dep.7"],
    "pde4x2-dual": [],
    "pde4x4": ["sol.3"],
}

DEPENDENCE_DEVIATIONS = {
    "pde2": ["comb.1", "comb.2"],
    "pde4x2": ["def.c2", "comb.1", "comb.2", "comb.3", "comb.4"],
    "pde4x2-dual": ["comb.1", "comb.2", "comb.3", "comb.4"],
    "pde4x4": ["comb.1", "comb.2", "comb.3", "comb.4"],
}

COMBINATIONS = {
    "pde2": ["p_s + q_t", "p_t - q_s"],
    "pde4x2": ["w_s + x_t", "w_t - x_s", "y_s + z_t", "y_t - z_s"],
    "pde4x2-dual": ["w_s + y_t", "x_s + z_t", "w_t - y_s", "x_t - z_s"],
    "pde4x4": [
        "w_s + x_t + y_u + z_v",
        "w_t - x_s + y_v - z_u",
        "w_u + x_v - y_s - z_t",
        "w_v - x_u - y_t + z_s",
    ],
}


def sample_split(kind, rhs="(-s*u^2 - 5*u')/s"):
    return split(ScalarODE.from_text(rhs), kind).system


@pytest.mark.parametrize("kind", SPLIT_KINDS)
def test_condition_ids_per_kind(kind):
    report = check_cr(sample_split(kind))
    assert [rec.cid for rec in report.records] == CONDITION_IDS[kind]
    assert report.kind == kind


@pytest.mark.parametrize("kind", SPLIT_KINDS)
def test_split_images_pass_their_conditions(kind):
    report = check_cr(sample_split(kind))
    assert report.verdict is True
    assert report.failing() == []
    assert all(rec.passed for rec in report.records)


@pytest.mark.parametrize("kind", SPLIT_KINDS)
def test_catalog_deviations_are_frozen(kind):
    report = check_cr(sample_split(kind))
    assert [d["id"] for d in report.deviations] == KIND_DEVIATIONS[kind]
    for d in report.deviations:
        assert set(d) == {"id", "catalog", "derived"}
        assert d["catalog"] != d["derived"]


@pytest.mark.parametrize("kind", PDE_KINDS)
def test_dependence_audit_per_pde_kind(kind):
    report = check_derivative_dependence(sample_split(kind))
    assert report.verdict is True
    assert list(report.combinations) == COMBINATIONS[kind]
    assert [d["id"] for d in report.deviations] == DEPENDENCE_DEVIATIONS[kind]


@pytest.mark.parametrize("kind", ("ode2", "ode3", "ode4"))
def test_dependence_audit_rejects_ode_kinds(kind):
    with pytest.raises(KindError):
        check_derivative_dependence(sample_split(kind))


def test_full_report_merges_for_pde_kinds():
    sys = sample_split("pde2")
    merged = full_report(sys)
    plain = check_cr(sys)
    dep = check_derivative_dependence(sys)
    assert [r.cid for r in merged.records] == [
        r.cid for r in plain.records
    ] + [r.cid for r in dep.records]
    assert merged.verdict is True
    assert list(merged.combinations) == COMBINATIONS["pde2"]
    # for ODE kinds the merged report is just the plain one
    sys4 = sample_split("ode4")
    assert [r.cid for r in full_report(sys4).records] == CONDITION_IDS["ode4"]


def test_checks_reject_generic_kind():
    sys = read_system(GOLDEN / "three_power_printed.txt")
    with pytest.raises(KindError):
        check_cr(sys)
    with pytest.raises(KindError):
        reconstruct_base(sys)


def test_report_json_schema():
    report = full_report(sample_split("pde4x2"))
    data = report.to_json_dict()
    assert set(data) == {"kind", "conditions", "verdict", "deviations", "combinations"}
    assert data["kind"] == "pde4x2"
    assert data["verdict"] == "PASS"
    for cond in data["conditions"]:
        assert set(cond) == {"id", "condition", "residual", "pass"}
        assert cond["pass"] is True
        assert cond["residual"] == "0"
    json.dumps(data)  # must be serializable as-is


def test_failing_condition_reports_residual():
    text = (
        "indep: s\n"
        "dep: p,q\n"
        "kind: ode2\n"
        "eq: p'' = p^2 - q^2 + q\n"
        "eq: q'' = 2*p*q\n"
    )
    report = check_cr(parse_system(text))
    assert report.verdict is False
    failing = report.failing()
    assert [rec.cid for rec in failing] == ["dep.2"]
    assert failing[0].residual == "-1"
    data = report.to_json_dict()
    assert data["verdict"] == "FAIL"


RECONSTRUCTION_CORPUS = [
    "u^2/s^5",
    "(-s*u^2 - 5*u')/s",
    "0",
    "u",
    "u^2",
    "u^3 - u",
    "s*u' + u",
    "(u + u')/s^2",
    "u*u'",
    "u^2*u' + s*u",
]


@pytest.mark.parametrize("rhs", RECONSTRUCTION_CORPUS)
@pytest.mark.parametrize("kind", SPLIT_KINDS)
def test_round_trip_reconstruction(kind, rhs):
    base = ScalarODE.from_text(rhs)
    image = split(base, kind).system
    recovered = reconstruct_base(image)
    assert recovered == base


def test_reconstruct_refuses_non_image_system():
    text = (
        "indep: s\n"
        "dep: p,q\n"
        "kind: ode2\n"
        "eq: p'' = p^2\n"
        "eq: q'' = q^2\n"
    )
    with pytest.raises(VerdictError) as err:
        reconstruct_base(parse_system(text))
    assert err.value.report is not None
    assert err.value.report.verdict is False
    assert err.value.report.failing()


def test_reconstruct_base_returns_scalar_ode():
    sys = read_system(GOLDEN / "four_emden.txt")
    ode = reconstruct_base(sys)
    assert ode == ScalarODE.from_text("(-s*u^2 - 5*u')/s")
    sys2 = read_system(GOLDEN / "emden_pde4x2.txt")
    assert reconstruct_base(sys2) == ScalarODE.from_text("(-s*u^2 - 5*u')/s")


def test_kind_spec_shapes_match_condition_counts():
    for kind in SPLIT_KINDS:
        spec = kind_spec(kind)
        n = len(CONDITION_IDS[kind])
        assert n == {2: 4 if not spec.pde else 6, 3: 4, 4: 8 if not spec.pde else 12}[
            len(spec.deps)
        ]
