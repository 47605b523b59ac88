"""Tests for recurrence schemes, their fractions and scheme files"""
import json
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from core.continued_fraction import convergents
from core.families import family_IV
from core.recurrence import (
    AffineTemplate,
    RecurrenceError,
    RecurrenceScheme,
    cf_from_recurrence,
    load_scheme_file,
    parse_rational,
    recurrence_residual,
)
from tests.conftest import PROPERTY_CASES


def test_fraction_elements_follow_rows():
    scheme = RecurrenceScheme(lambda k: (k, 2 * k + 1, k + 3))
    cf = cf_from_recurrence(scheme)
    assert cf.b0 == 3
    # a_k = f_{k+1} h_k, b_k = g_{k+1}
    assert cf.elements(3) == [(Fraction(2 * 4), Fraction(5)), (Fraction(3 * 5), Fraction(7)), (Fraction(4 * 6), Fraction(9))]


def test_element_k_reads_only_rows_k_and_k_plus_1():
    queried = []

    def rows(k):
        queried.append(k)
        return k, 2 * k + 1, k + 3

    cf = cf_from_recurrence(RecurrenceScheme(rows))
    assert sorted(queried) == [1, 2]
    for k in (7, 3, 12):
        queried.clear()
        cf.element(k)
        assert sorted(queried) == [k, k + 1]


def test_geometric_sequence_gives_exact_ratio():
    # T_k = 2^-k satisfies 3 T_k = 2 T_{k+1} + 8 T_{k+2}; f_1 A/B = 3 * 2 = 6
    scheme = RecurrenceScheme(lambda k: (3, 2, 8))
    cf = cf_from_recurrence(scheme)
    last = convergents(cf, 200)[-1]
    with mp.workdps(30):
        assert abs(last.to_mpf() - 6) < mpf("1e-20")


def test_zero_leading_coefficient_is_rejected():
    scheme = RecurrenceScheme(lambda k: (k - 2, 1, 1))
    with pytest.raises(RecurrenceError):
        scheme.triple(2)


def test_zero_first_partial_numerator_is_rejected():
    with pytest.raises(RecurrenceError, match="h_1 = 0"):
        cf_from_recurrence(RecurrenceScheme(lambda k: (1, 1, 0)))


def test_depth_zero_builds_single_number():
    cf = cf_from_recurrence(RecurrenceScheme(lambda k: (1, 5, 0)), depth=0)
    assert cf.depth == 0
    assert [c.value for c in convergents(cf, 4)] == [Fraction(5)]


def test_shift_drops_first_row():
    scheme = RecurrenceScheme(lambda k: (k, k + 1, k + 2))
    shifted = scheme.shift()
    for k in range(1, 10):
        assert shifted.triple(k)[1:] == scheme.triple(k + 1)[1:]


def test_shifted_scheme_builds_the_tail(rng):
    for _ in range(PROPERTY_CASES):
        p, q = rng.randint(1, 5), rng.randint(1, 5)
        scheme = RecurrenceScheme(lambda k, p=p, q=q: (k + p, 2 * k + q, k + 1))
        cf = cf_from_recurrence(scheme)
        tail = cf_from_recurrence(scheme.shift())
        f2 = scheme.triple(2).f
        assert tail.b0 == cf.element(1)[1]
        assert tail.element(1) == cf.element(2)
        assert f2 * scheme.triple(1).h == cf.element(1)[0]


def test_residual_of_exact_sequence_is_zero():
    # constant T_k satisfies 2T = T + T
    scheme = RecurrenceScheme(lambda k: (2, 1, 1))
    terms = [Fraction(1)] * 12
    assert recurrence_residual(scheme, terms, 10) == [0] * 10


def test_residual_needs_enough_terms():
    scheme = RecurrenceScheme(lambda k: (2, 1, 1))
    with pytest.raises(RecurrenceError):
        recurrence_residual(scheme, [1, 1, 1], 5)


def test_residual_with_mpmath_terms():
    spec = family_IV(1)
    with mp.workdps(50):
        terms = [mp.quad(lambda x, n=n: x ** n * mp.exp(x), [0, 1]) for n in range(8)]
        residuals = recurrence_residual(spec.scheme, terms, 6)
        assert max(abs(r) for r in residuals) < mpf("1e-40")


def test_parse_rational():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational(" 7 ") == Fraction(7)
    for bad in ("1.5", "1e3", "x", "1/0"):
        with pytest.raises(RecurrenceError):
            parse_rational(bad)


def test_affine_template():
    template = AffineTemplate(p="1/2", q="-1")
    assert template.at(3) == Fraction(-5, 2)


def test_load_scheme_file(tmp_path):
    path = tmp_path / "brouncker.json"
    path.write_text(json.dumps({
        "f": {"p": "-1", "q": "2"},
        "g": {"p": "2", "q": "0"},
        "h": {"p": "1", "q": "2"},
        "seed_note": "A = atan(1)",
        "label": "brouncker_tail",
    }), encoding="utf-8")
    scheme = load_scheme_file(path)
    assert scheme.label == "brouncker_tail"
    cf = cf_from_recurrence(scheme)
    assert cf.b0 == 2
    assert cf.elements(2) == [(Fraction(9), Fraction(2)), (Fraction(25), Fraction(2))]


@pytest.mark.parametrize("payload", [
    "{not json",
    json.dumps({"f": {"p": "1", "q": "1"}, "g": {"p": "1", "q": "1"}}),
    json.dumps({"f": {"p": "1.5", "q": "1"}, "g": {"p": "1", "q": "1"}, "h": {"p": "1", "q": "0"}}),
    json.dumps({"f": {"p": "1", "q": "1"}, "g": {"p": "1", "q": "1"}, "h": {"p": "1", "q": "0"}, "x": 1}),
])
def test_malformed_scheme_files(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload, encoding="utf-8")
    with pytest.raises(RecurrenceError):
        load_scheme_file(path)


def test_missing_scheme_file(tmp_path):
    with pytest.raises(RecurrenceError, match="Cannot read"):
        load_scheme_file(tmp_path / "absent.json")
