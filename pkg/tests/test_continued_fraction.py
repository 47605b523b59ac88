"""Tests for exact convergents and tolerance-driven evaluation"""
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from analysis.oracle import bottom_up_truncation
from config.catalog import catalog, get_entry
from core.continued_fraction import (
    ContinuedFractionError,
    Convergent,
    GeneralizedCF,
    as_fraction,
    convergent_at,
    convergents,
    eval_to_tolerance,
)
from core.families import family_I, family_I_simple
from core.models import Termination
from tests.conftest import PROPERTY_CASES


def golden() -> GeneralizedCF:
    return GeneralizedCF(1, lambda k: (1, 1), label="golden")


def test_golden_ratio_convergents_are_fibonacci_ratios():
    values = [c.value for c in convergents(golden(), 5)]
    assert values == [Fraction(1), Fraction(2), Fraction(3, 2), Fraction(5, 3), Fraction(8, 5), Fraction(13, 8)]


def test_zero_denominator_level_is_undefined():
    # 1 + 2/(0 + 8/(-1 + ...)): q_1 = 0
    cf = get_entry("log3_zero_denominator").cf
    levels = convergents(cf, 3)
    assert levels[1].q == 0
    assert not levels[1].defined
    assert levels[1].value is None
    assert levels[1].to_mpf() is None
    assert levels[2].defined


def test_convergent_at_matches_list():
    cf = golden()
    assert convergent_at(cf, 7) == convergents(cf, 7)[7]
    assert convergent_at(cf, 0) == Convergent(0, Fraction(1), Fraction(1))


def test_finite_fraction_stops_at_depth():
    cf = GeneralizedCF.from_elements(1, [(1, 2), (1, 2)])
    assert len(convergents(cf, 10)) == 3
    with pytest.raises(ContinuedFractionError):
        convergent_at(cf, 3)


def test_zero_partial_numerator_is_rejected():
    cf = GeneralizedCF(0, lambda k: (0 if k == 3 else 1, 1))
    with pytest.raises(ContinuedFractionError, match="depth 2"):
        convergents(cf, 5)


def test_as_fraction_refuses_floats():
    assert as_fraction("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_truncate_keeps_prefix():
    cf = golden().truncate(4)
    assert cf.depth == 4
    assert cf.elements(10) == [(1, 1)] * 4


def test_determinant_identity(rng, random_cf):
    for _ in range(PROPERTY_CASES):
        cf = random_cf(rng, rng.randint(1, 12), positive=False)
        levels = convergents(cf, cf.depth)
        product = Fraction(1)
        for k in range(1, len(levels)):
            product *= cf.element(k)[0]
            lhs = levels[k].p * levels[k - 1].q - levels[k - 1].p * levels[k].q
            assert lhs == (-1) ** (k - 1) * product


def test_bottom_up_fold_equals_convergents(rng, random_cf):
    for _ in range(PROPERTY_CASES):
        cf = random_cf(rng, rng.randint(1, 12))
        for convergent in convergents(cf, cf.depth):
            assert bottom_up_truncation(cf, convergent.level) == convergent.value


def test_determinant_identity_on_deep_fractions(rng, random_cf):
    for depth in range(40, 51):
        cf = random_cf(rng, depth, positive=False)
        levels = convergents(cf, depth)
        product = Fraction(1)
        for k in range(1, depth + 1):
            product *= cf.element(k)[0]
            assert levels[k].p * levels[k - 1].q - levels[k - 1].p * levels[k].q == (-1) ** (k - 1) * product


@pytest.mark.parametrize("entry", catalog(), ids=lambda entry: entry.name)
def test_bottom_up_fold_matches_catalog_convergents(entry):
    cf, _ = entry.build()
    for convergent in convergents(cf, 15):
        folded = bottom_up_truncation(cf, convergent.level)
        if folded is not None and convergent.defined:
            assert folded == convergent.value


def test_bottom_up_fold_with_signs_agrees_where_defined(rng, random_cf):
    for _ in range(PROPERTY_CASES):
        cf = random_cf(rng, rng.randint(1, 10), positive=False)
        for convergent in convergents(cf, cf.depth):
            folded = bottom_up_truncation(cf, convergent.level)
            if folded is not None and convergent.defined:
                assert folded == convergent.value


def test_positive_fractions_alternate_and_bracket(rng, random_cf):
    for _ in range(PROPERTY_CASES):
        cf = random_cf(rng, rng.randint(3, 14))
        values = [c.value for c in convergents(cf, cf.depth)]
        diffs = [b - a for a, b in zip(values, values[1:])]
        assert all(d1 * d2 < 0 for d1, d2 in zip(diffs, diffs[1:]))
        limit = values[-1]
        for x_k, x_next in zip(values[:-2], values[1:-1]):
            assert min(x_k, x_next) <= limit <= max(x_k, x_next)


def test_eval_golden_ratio_meets_tolerance():
    report = eval_to_tolerance(golden(), tol=1e-20, max_depth=500, precision=30)
    assert report.termination == Termination.TOLERANCE_MET
    assert report.converged
    assert report.bracketing
    with mp.workdps(40):
        assert abs(report.final_value - (1 + mp.sqrt(5)) / 2) < mpf("1e-19")


def test_eval_respects_max_depth():
    report = eval_to_tolerance(golden(), tol=1e-40, max_depth=10, precision=20)
    assert report.termination == Termination.MAX_DEPTH
    assert report.depth_used == 10
    assert len(report.convergents) == 11


def test_eval_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        eval_to_tolerance(golden(), tol=0)


def test_eval_traverses_zero_denominator():
    cf = get_entry("exp_two_zero_denominator").cf
    report = eval_to_tolerance(cf, tol=1e-25, max_depth=200, precision=40)
    assert report.undefined_levels == [1]
    assert report.termination == Termination.TOLERANCE_MET
    with mp.workdps(40):
        target = 2 / (mp.e ** 2 - 1)
        assert abs(report.final_value - target) < mpf("1e-20")


def test_undefined_run_terminates():
    # 0 + 1/(0 + 1/(0 + ...)) has q = 0 on every odd level and p = 0 on every even one
    cf = GeneralizedCF(0, lambda k: (1, 0))
    report = eval_to_tolerance(cf, tol=1e-10, max_depth=50, precision=20, undefined_run_limit=0)
    assert report.termination == Termination.UNDEFINED_CONVERGENT_RUN
    assert report.undefined_levels == [1]


def test_divergent_fraction_is_flagged_within_window():
    cf = get_entry("log_divergent_alpha_eq_gamma").cf
    report = eval_to_tolerance(cf, tol=1e-10, max_depth=256, precision=30)
    assert report.termination == Termination.DIVERGENCE_DETECTED
    assert report.depth_used <= 256
    assert report.final_value is None


def test_brouncker_is_not_flagged_divergent():
    cf = get_entry("brouncker_4_over_pi").cf
    report = eval_to_tolerance(cf, tol=1e-12, max_depth=400, precision=30)
    assert report.termination == Termination.MAX_DEPTH
    assert report.bracketing


@pytest.mark.parametrize("spec", [lambda: family_I(1, 0, 1), lambda: family_I_simple(0, 1)])
def test_alternating_undefined_levels_never_meet_tolerance(spec):
    # convergents run 0, undef, 0, undef, ...: the defined values agree but are never neighbours
    cf = spec().cf
    assert [c.value for c in convergents(cf, 5)] == [0, None, 0, None, 0, None]
    report = eval_to_tolerance(cf, tol=1e-12, max_depth=500, precision=30)
    assert report.termination == Termination.DIVERGENCE_DETECTED
    assert report.final_value is None
    assert report.depth_used <= 64 + 2


def test_tolerance_needs_adjacent_levels():
    # a single q = 0 level resets the streak of small differences
    cf = get_entry("exp_two_zero_denominator").cf
    report = eval_to_tolerance(cf, tol=1e-25, max_depth=200, precision=40)
    assert report.termination == Termination.TOLERANCE_MET
    assert report.depth_used >= 4
