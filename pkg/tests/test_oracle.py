"""Tests for the closed-form and quadrature oracles"""
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from analysis import oracle
from analysis.oracle import (
    DivergentTargetError,
    NonRealTargetError,
    QuadratureError,
    bottom_up_truncation,
    entry_target,
    machin_pi,
    quadrature_AB,
    seed_closed_forms,
    seed_moments,
    target_value,
)
from config.catalog import get_entry
from core.continued_fraction import GeneralizedCF, eval_to_tolerance
from core.families import (
    family_I,
    family_I_simple,
    family_II,
    family_II_mn,
    family_III,
    family_IV,
    family_V,
    family_VI,
    family_VII,
)
from core.models import Termination
from core.recurrence import recurrence_residual

TIGHT = mpf("1e-45")


def test_machin_pi():
    with mp.workdps(60):
        assert abs(machin_pi(50) - mp.pi) < mpf("1e-49")


@pytest.mark.parametrize("spec, expected", [
    (lambda: family_I(1, 1, 1), lambda: 1 + mp.sqrt(5)),
    (lambda: family_I(3, 2, 1), lambda: mpf(6)),
    (lambda: family_I(1, 0, 1), lambda: mpf(2)),
    (lambda: family_I_simple(1, 1), lambda: (1 + mp.sqrt(5)) / 2),
    (lambda: family_I_simple(-1, 1), lambda: (-1 - mp.sqrt(5)) / 2),
    (lambda: family_II(1, 1), lambda: 1 / mp.log(2)),
    (lambda: family_II(1, 2), lambda: 2 / mp.log(3)),
    (lambda: family_II_mn(1, 5), lambda: 2 / mp.log(mpf(3) / 2)),
    (lambda: family_III(1, 1), lambda: 1 + 4 / mp.pi),
    (lambda: family_III(3, 1), lambda: 1 + 6 * mp.sqrt(3) / mp.pi),
    (lambda: family_III(4, -1), lambda: -1 + 4 / mp.log(3)),
    (lambda: family_III(9, -1), lambda: -1 + 6 / mp.log(2)),
    (lambda: family_IV(1), lambda: 1 / (mp.e - 1)),
    (lambda: family_IV(2), lambda: 2 / (mp.e ** 2 - 1)),
    (lambda: family_IV(-1), lambda: mp.e / (mp.e - 1)),
])
def test_closed_form_targets(spec, expected):
    with mp.workdps(60):
        assert abs(target_value(spec(), 50) - expected()) < TIGHT


def test_divergent_target_raises():
    with pytest.raises(DivergentTargetError):
        target_value(family_III(1, -1))


def test_non_real_target_raises():
    with pytest.raises(NonRealTargetError):
        target_value(family_I(-1, 1, 1))


def test_entry_target_follows_recipe():
    with mp.workdps(60):
        assert abs(entry_target(get_entry("euler_e"), 50) - mp.e) < TIGHT
        assert abs(entry_target(get_entry("brouncker_4_over_pi"), 50) - 4 / mp.pi) < TIGHT
        assert abs(entry_target(get_entry("sqrt_e_reciprocal"), 50) - 1 / (mp.sqrt(mp.e) - 1)) < TIGHT
        assert abs(entry_target(get_entry("log_3_over_2_halved"), 50) - 1 / mp.log(mpf(3) / 2)) < TIGHT
        assert abs(entry_target(get_entry("exp_two_tanh_form"), 50)
                   - 2 * (mp.e ** 2 - 1) / (mp.e ** 2 + 1)) < TIGHT


def test_entry_target_of_divergent_entry_raises():
    with pytest.raises(DivergentTargetError):
        entry_target(get_entry("log_divergent_alpha_eq_gamma"))


def test_quadrature_of_polynomial_weight():
    # a=2, b=1, c=1, θ=1, λ=2, α=1: A = 7/6, B = 5/12 on (0, 1)
    with mp.workdps(40):
        seed_a, seed_b = quadrature_AB(family_V(2, 1, 1, 1, 2, 1), 30)
        assert abs(seed_a - mpf(7) / 6) < mpf("1e-20")
        assert abs(seed_b - mpf(5) / 12) < mpf("1e-20")
        assert abs(target_value(family_V(2, 1, 1, 1, 2, 1), 30) - mpf(28) / 5) < mpf("1e-20")


def test_quadrature_for_two_term_reduction():
    with mp.workdps(40):
        assert abs(target_value(family_VI(1, 0, 1, 2, 1), 30) - 3) < mpf("1e-20")


def test_quadrature_handles_endpoint_singularities():
    # δ = λ = 1/2: both endpoints carry an inverse square root
    spec = family_VII(1, Fraction(1, 2), Fraction(1, 2))
    with mp.workdps(70):
        seed_a, _ = quadrature_AB(spec, 50)
        reference = mp.pi * mp.exp(mpf(1) / 2) * mp.besseli(0, mpf(1) / 2)
        assert abs(seed_a - reference) < mpf("1e-40")


@pytest.mark.parametrize("spec, expected_a, expected_b", [
    (lambda: family_VII(1, 1, 1), lambda: mp.e - 1, lambda: mpf(1)),
    (lambda: family_VI(1, 1, 1, 1, 1), lambda: mp.log(2), lambda: 1 - mp.log(2)),
    (lambda: family_V(1, 0, 1, 1, 1, 1), lambda: mpf(1), lambda: mpf(1) / 2),
])
def test_quadrature_seed_examples(spec, expected_a, expected_b):
    with mp.workdps(70):
        seed_a, seed_b = quadrature_AB(spec(), 50)
        assert abs(seed_a - expected_a()) < mpf("1e-40")
        assert abs(seed_b - expected_b()) < mpf("1e-40")


@pytest.mark.parametrize("spec", [
    lambda: family_VII(1, Fraction(1, 2), Fraction(1, 2)),
    lambda: family_VII(-2, Fraction(3, 2), Fraction(1, 3)),
    lambda: family_VI(2, 1, 2, Fraction(1, 2), Fraction(3, 2)),
    lambda: family_V(2, 1, 1, 1, Fraction(1, 2), 1),
    lambda: family_V(1, 2, Fraction(-1, 2), 1, Fraction(1, 2), Fraction(1, 2)),
])
def test_quadrature_agrees_across_precisions(spec):
    member = spec()
    with mp.workdps(60):
        low_a, low_b = quadrature_AB(member, 30)
        high_a, high_b = quadrature_AB(member, 40)
        assert abs(low_a - high_a) < mpf("1e-18")
        assert abs(low_b - high_b) < mpf("1e-18")


def test_unsettled_quadrature_raises(monkeypatch):
    monkeypatch.setattr(oracle, "QUADRATURE_DEGREES", range(1, 3))
    with pytest.raises(QuadratureError):
        quadrature_AB(family_VII(1, Fraction(1, 3), Fraction(1, 3)), 50)


@pytest.mark.parametrize("alpha", [Fraction(1, 10), Fraction(1, 100)])
def test_exponential_family_tends_to_one(alpha):
    spec = family_IV(alpha)
    report = eval_to_tolerance(spec.cf, tol=1e-20)
    assert report.termination == Termination.TOLERANCE_MET
    bound = 3 * float(alpha)
    assert abs(report.final_value - 1) < bound
    assert abs(target_value(spec) - 1) < bound


def test_quadrature_only_for_integral_families():
    with pytest.raises(ValueError):
        quadrature_AB(family_IV(1))


def test_seed_closed_forms_only_for_closed_families():
    assert seed_closed_forms(family_I(1, 1, 1)) is None
    assert seed_closed_forms(family_III(1, -1)) is None
    assert seed_moments(family_VII(1, 1, 1), 5) is None


@pytest.mark.parametrize("spec", [
    lambda: family_II(1, 1),
    lambda: family_II(2, 1),
    lambda: family_II_mn(1, 3),
    lambda: family_III(1, 1),
    lambda: family_III(3, 1),
    lambda: family_III(4, -1),
    lambda: family_IV(1),
    lambda: family_IV(2),
    lambda: family_IV(Fraction(1, 2)),
])
def test_seed_moments_satisfy_the_rows(spec):
    spec = spec()
    with mp.workdps(50):
        terms = seed_moments(spec, 12)
        residuals = recurrence_residual(spec.scheme, terms, 10)
        assert max(abs(r) for r in residuals) < mpf("1e-40")


def test_bottom_up_truncation_levels():
    cf = GeneralizedCF(1, lambda k: (1, 1))
    assert bottom_up_truncation(cf, 0) == 1
    assert bottom_up_truncation(cf, 3) == Fraction(5, 3)
    with pytest.raises(ValueError):
        bottom_up_truncation(cf, -1)
    assert bottom_up_truncation(GeneralizedCF.from_elements(0, [(1, 1), (1, 0)]), 2) is None
