"""Tests for family constructors, domains and the identity catalog"""
import re
from fractions import Fraction

import pytest

from config.catalog import UnknownEntryError, catalog, get_entries_by_family, get_entry, validate_entry_name
from core.families import (
    FamilyDomainError,
    build_family,
    family_I,
    family_I_simple,
    family_II,
    family_II_mn,
    family_III,
    family_III_mn,
    family_IV,
    family_V,
    family_VI,
    family_VII,
)
from core.models import FamilyId, TargetKind, Termination
from core.recurrence import cf_from_recurrence

COHERENCE_LEVELS = 50


def test_family_I_elements():
    spec = family_I(1, 1, 1)
    assert spec.family_id == FamilyId.I
    assert spec.cf.b0 == 2
    assert spec.cf.elements(3) == [(6, 3), (12, 4), (20, 5)]
    assert spec.target.kind == TargetKind.SQRT_FORM


def test_family_I_negative_discriminant_is_not_real():
    assert not family_I(-1, 1, 1).target.real


def test_family_I_simple_constant_rows():
    spec = family_I_simple(1, 1)
    assert spec.cf.b0 == 1
    assert spec.cf.elements(3) == [(1, 1)] * 3


def test_family_II_head_and_zero_denominator():
    spec = family_II(1, 2)
    assert spec.head_supplied
    assert spec.cf.b0 == 1
    assert spec.cf.elements(3) == [(2, 0), (8, -1), (18, -2)]


def test_family_II_mn_uses_base_parameters():
    spec = family_II_mn(1, 4)
    assert spec.scheme_params() == {"alpha": Fraction(3), "beta": Fraction(2)}
    assert spec.cf.b0 == 3
    assert spec.cf.elements(3) == [(6, 4), (24, 5), (54, 6)]


def test_family_III_branches():
    assert family_III(1, 1).family_id == FamilyId.III
    assert family_III(1, 1).target.kind == TargetKind.ATAN_FORM

    log_branch = family_III(4, -1)
    assert log_branch.family_id == FamilyId.III_LOG
    assert log_branch.target.kind == TargetKind.LOG_FORM
    assert log_branch.cf.b0 == 3
    assert log_branch.cf.elements(3) == [(-4, 13), (-36, 23), (-100, 33)]

    divergent = family_III(1, -1)
    assert divergent.target.kind == TargetKind.DIVERGENT
    assert not divergent.target.real

    assert not family_III(1, -2).target.real


def test_family_III_mn():
    spec = family_III_mn(1, 3)
    assert spec.family_id == FamilyId.III_MN
    assert spec.scheme_params() == {"alpha": Fraction(4), "beta": Fraction(2)}


def test_family_IV_elements():
    spec = family_IV(2)
    assert spec.cf.b0 == -1
    assert spec.cf.elements(4) == [(2, 0), (4, 1), (6, 2), (8, 3)]


def test_family_VI_without_b_is_a_single_number():
    spec = family_VI(1, 0, 1, 2, 1)
    assert spec.cf.depth == 0
    assert spec.cf.b0 == 3


@pytest.mark.parametrize("build", [
    lambda: family_I(0, 1, 1),
    lambda: family_I_simple(0, -1),
    lambda: family_II(0, 1),
    lambda: family_II(1, -1),
    lambda: family_II_mn(2, 1),
    lambda: family_III(-1, 1),
    lambda: family_III_mn(3, 1),
    lambda: family_IV(0),
    lambda: family_V(0, 1, 1, 1, 1, 1),
    lambda: family_V(1, -1, -1, 1, 1, 1),
    lambda: family_VI(1, -1, 1, 1, 1),
    lambda: family_VII(1, 0, 1),
    lambda: family_VII(0, 1, 1),
])
def test_domain_violations(build):
    with pytest.raises(FamilyDomainError):
        build()


def test_build_family_accepts_greek_and_ascii_names():
    greek = build_family(FamilyId.VII, {"δ": Fraction(1, 2), "λ": Fraction(1, 2), "α": 1})
    ascii_ = build_family(FamilyId.VII, {"delta": Fraction(1, 2), "lambda": Fraction(1, 2), "alpha": 1})
    assert greek.label == ascii_.label
    with pytest.raises(FamilyDomainError):
        build_family(FamilyId.IV, {"omega": 1})
    with pytest.raises(FamilyDomainError):
        build_family(FamilyId.IV, {})


def test_display_params():
    assert family_III(1, 1).display_params() == "α=1 β=1"
    assert family_II_mn(1, 3).display_params() == "m=1 n=3"


def _same_elements(left, right, levels=COHERENCE_LEVELS):
    assert left.b0 == right.b0
    assert left.elements(levels) == right.elements(levels)


def test_family_V_specializes_to_family_I():
    for a, b, c in [(1, 1, 1), (3, 2, 1), (2, 1, 3)]:
        _same_elements(family_V(a, b, c, 1, 1, 1).cf, family_I(a, b, c).cf)


def test_family_VI_specializes_to_family_II():
    for a, b in [(1, 1), (1, 2), (2, 1), (3, -1)]:
        _same_elements(family_VI(a, b, 1, 1, 1).cf, cf_from_recurrence(family_II(a, b).scheme))


def test_family_VI_specializes_to_family_III():
    for b in [1, 2, Fraction(1, 3)]:
        _same_elements(family_VI(1, b, 2, 1, 1).cf, cf_from_recurrence(family_III(1, b).scheme))


def test_family_VII_specializes_to_family_IV():
    for alpha in [1, 2, -1, Fraction(1, 2)]:
        _same_elements(family_VII(alpha, 1, 1).cf, cf_from_recurrence(family_IV(alpha).scheme))


def test_catalog_names_are_unique_snake_case():
    names = [entry.name for entry in catalog()]
    assert len(names) == len(set(names))
    assert len(names) >= 22
    assert all(re.fullmatch(r"[a-z0-9]+(_[a-z0-9]+)*", name) for name in names)


def test_catalog_entries_build():
    for entry in catalog():
        cf, value_map = entry.build()
        assert cf.label == entry.name
        cf.elements(5)


def test_catalog_lookup():
    assert get_entry("brouncker_4_over_pi").family_id == FamilyId.III
    assert validate_entry_name("euler_e")
    assert not validate_entry_name("euler_f")
    with pytest.raises(UnknownEntryError):
        get_entry("euler_f")


def test_catalog_by_family():
    entries = get_entries_by_family(FamilyId.IV)
    assert entries
    assert all(entry.family_id == FamilyId.IV for entry in entries)
    assert "euler_e" in [entry.name for entry in entries]


def test_divergent_entry_expects_divergence():
    assert get_entry("log_divergent_alpha_eq_gamma").expected == Termination.DIVERGENCE_DETECTED
