import json
import shutil
from fractions import Fraction

import pytest

from pfaffian_mirror import closed_form_period, get_family, list_families, recurrence_solve
from pfaffian_mirror.family_registry import REGISTRY_ENV, FamilySpec, RegistryError, registry_path
from pfaffian_mirror.frobenius import is_mum


def test_invariants_lookup():
    inv = get_family("x13").invariants
    assert (inv.deg, inv.c2H, inv.h12) == (13, 58, 61)
    inv = get_family("x25").invariants
    assert (inv.deg, inv.c2H, inv.h12) == (25, 70, 51)


@pytest.mark.parametrize("name, power", [("x13", 7), ("x5", 10), ("x7", 9), ("x10", 8)])
def test_effective_power(name, power):
    spec = get_family(name)
    assert spec.effective_power == power
    assert spec.effective_power_status != "suspect"


def test_x9_power_flagged():
    assert get_family("x9").effective_power_status == "suspect"


def test_closed_form_examples():
    # direct evaluation: C(4,2)^2 * (C(4,2) + C(5,2)*4 + C(6,2)) = 36 * 61
    assert list(closed_form_period("x13", 2).coeffs) == [1, 20, 2196]
    assert closed_form_period("x9", 1)[1] == 36
    assert closed_form_period("x10", 1)[1] == 28


@pytest.mark.parametrize("name", ["x13", "x5", "x10", "x9"])
def test_closed_form_agrees_with_recurrence(name):
    spec = get_family(name)
    assert closed_form_period(spec, 30) == recurrence_solve(spec.operator, 1, 30)


def test_x7_closed_form_disputed():
    spec = get_family("x7")
    assert spec.period_status == "disputed"
    closed = closed_form_period(spec, 5)
    rec = recurrence_solve(spec.operator, 1, 5)
    mm = spec.golden["period_mismatch"]
    assert (str(closed[1]), str(rec[1])) == (mm["closed_form_a1"], mm["operator_a1"])


def test_every_operator_is_mum():
    for name in list_families():
        L = get_family(name).operator
        if L is not None:
            assert is_mum(L), name
            assert L.apply(recurrence_solve(L, 1, 15)).is_zero()


def test_geometry_agrees_with_registry():
    from pfaffian_mirror.report import geometry_summary

    for name in ("x5", "x7", "x10"):
        spec = get_family(name)
        g = geometry_summary(spec)
        assert g["deg"] == str(spec.invariants.deg)
        assert g["c2H"] == str(spec.invariants.c2H)


def test_unknown_family():
    with pytest.raises(RegistryError):
        get_family("x99")
    with pytest.raises(RegistryError):
        closed_form_period("x14_ref", 3)
    with pytest.raises(RegistryError):
        get_family("x7").transform_steps("to-infinity")


def test_chi_consistency_enforced():
    doc = json.loads((registry_path() / "x13.json").read_text())
    doc["invariants"]["chi"] = "-100"
    with pytest.raises(RegistryError):
        FamilySpec.from_json(doc)


def test_registry_override(tmp_path, monkeypatch):
    shutil.copy(registry_path() / "x9.json", tmp_path / "x9.json")
    monkeypatch.setenv(REGISTRY_ENV, str(tmp_path))
    assert list_families() == ["x9"]
    with pytest.raises(RegistryError):
        get_family("x13")


def test_spec_is_frozen():
    spec = get_family("x13")
    with pytest.raises(AttributeError):
        spec.name = "other"


def test_transform_steps_are_exact():
    steps = get_family("x13").transform_steps("to-infinity")
    assert steps[0] == ("invert",)
    assert steps[1] == ("gauge", Fraction(1, 2))
