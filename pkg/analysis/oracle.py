"""Independent ground truth for family values

Closed forms are evaluated with mpmath; families V to VII resolve their seed
integrals by tanh-sinh quadrature. Nothing here evaluates a continued fraction
top-down, so agreement with the convergents is a real cross-check.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from mpmath import mp, mpf

from config.settings import get_settings
from core.continued_fraction import GeneralizedCF, fraction_to_mpf
from core.families import FamilySpec
from core.models import FamilyId, TargetKind

logger = logging.getLogger(__name__)

QUADRATURE_DEGREES = range(6, 14)


class DivergentTargetError(ValueError):
    """Raised when a family member has no finite value"""


class NonRealTargetError(ValueError):
    """Raised when a family member's closed form is not real"""


class QuadratureError(ValueError):
    """Raised when seed quadrature misses its error target"""


def _working_digits(precision: Optional[int]) -> Tuple[int, int]:
    settings = get_settings()
    precision = precision or settings.precision.digits
    return precision, precision + settings.precision.guard_digits


def machin_pi(precision: Optional[int] = None) -> mpf:
    """π = 16 acot 5 - 4 acot 239, computed without any continued fraction"""
    precision, working = _working_digits(precision)
    with mp.workdps(working):
        value = 16 * mp.acot(5) - 4 * mp.acot(239)
    with mp.workdps(precision):
        return +value


def _signed_root(beta: Fraction, discriminant: Fraction) -> mpf:
    root = mp.sqrt(fraction_to_mpf(discriminant))
    return -root if beta < 0 else root


def _atan_sqrt(ratio: Fraction) -> mpf:
    """atan(√ratio), with the π-multiples taken from Machin's formula"""
    special = {Fraction(1): 4, Fraction(3): 3, Fraction(1, 3): 6}
    if ratio in special:
        return machin_pi(mp.dps) / special[ratio]
    return mp.atan(mp.sqrt(fraction_to_mpf(ratio)))


def _arctan_value(alpha: Fraction, beta: Fraction) -> mpf:
    """β + 1/A for family III"""
    al, be = fraction_to_mpf(alpha), fraction_to_mpf(beta)
    if beta > 0:
        seed_a = _atan_sqrt(beta / alpha) / mp.sqrt(al * be)
    else:
        ga = -be
        seed_a = mp.log((mp.sqrt(al) + mp.sqrt(ga)) / (mp.sqrt(al) - mp.sqrt(ga))) / (2 * mp.sqrt(al * ga))
    return be + 1 / seed_a


def target_value(spec: FamilySpec, precision: Optional[int] = None) -> mpf:
    """
    Value of a family member's fraction at the requested precision

    Args:
        spec: Family member
        precision: Decimal digits (settings default)

    Returns:
        mpmath number rounded to `precision` digits

    Raises:
        DivergentTargetError: for divergent members
        NonRealTargetError: when the closed form is not real
        QuadratureError: when a seed integral misses its error target
    """
    if spec.target.kind == TargetKind.DIVERGENT:
        raise DivergentTargetError(f"{spec.label}: no finite target, the fraction diverges")
    if not spec.target.real:
        raise NonRealTargetError(f"{spec.label}: closed form {spec.target.formula} is not real")

    precision, working = _working_digits(precision)
    p = spec.scheme_params()
    family_id = spec.family_id

    with mp.workdps(working):
        if family_id == FamilyId.I:
            al, be, ga = p["alpha"], p["beta"], p["gamma"]
            value = fraction_to_mpf(be) + _signed_root(be, be * be + 4 * al * ga)
        elif family_id == FamilyId.I_SIMPLE:
            be, ep = p["beta"], p["epsilon"]
            value = (fraction_to_mpf(be) + _signed_root(be, be * be + 4 * ep)) / 2
        elif family_id in (FamilyId.II, FamilyId.II_MN):
            al, be = p["alpha"], p["beta"]
            value = fraction_to_mpf(be) / mp.log(fraction_to_mpf((al + be) / al))
        elif family_id in (FamilyId.III, FamilyId.III_LOG, FamilyId.III_MN):
            value = _arctan_value(p["alpha"], p["beta"])
        elif family_id == FamilyId.IV:
            al = fraction_to_mpf(p["alpha"])
            value = al / mp.expm1(al)
        else:
            seed_a, seed_b = quadrature_AB(spec, precision)
            value = fraction_to_mpf(spec.scheme.triple(1).f) * seed_a / seed_b

    with mp.workdps(precision):
        return +value


def _quadrature_integrands(spec: FamilySpec):
    """
    Integrands of A and B for families V to VII

    Each integrand takes (x, r) with r = U - x supplied separately, so the
    weight near the upper limit is computed without cancellation.

    Returns:
        ((integrand A, exponent at 0), (integrand B, exponent at 0), exponent at U, U)
    """
    p = spec.params
    if spec.family_id == FamilyId.V:
        a, b, c = (fraction_to_mpf(p[k]) for k in ("a", "b", "c"))
        th, la, al = (fraction_to_mpf(p[k]) for k in ("theta", "lam", "alpha"))
        root = (-b + mp.sqrt(b * b + 4 * a * c)) / (2 * c)
        other_root = -b / c - root
        upper = root ** (1 / th)

        def weight(x, r):
            # a - b y - c y^2 = c (R - y)(y - R'), y = x^θ
            gap = -root * mp.expm1(th * mp.log1p(-r / upper))
            w = c * gap * (x ** th - other_root)
            return w ** (la - 1) if w > 0 else mpf(0)

        return (
            (lambda x, r: x ** (al - 1) * weight(x, r), al - 1),
            (lambda x, r: x ** (al + th - 1) * weight(x, r), al + th - 1),
            la - 1,
            upper
        )

    if spec.family_id == FamilyId.VI:
        a, b = fraction_to_mpf(p["a"]), fraction_to_mpf(p["b"])
        th, la, al = (fraction_to_mpf(p[k]) for k in ("theta", "lam", "alpha"))

        def weight(x, r):
            gap = -mp.expm1(th * mp.log1p(-r))
            return gap ** (la - 1) / (a + b * x ** th)

        return (
            (lambda x, r: x ** (al - 1) * weight(x, r), al - 1),
            (lambda x, r: x ** (al + th - 1) * weight(x, r), al + th - 1),
            la - 1,
            mpf(1)
        )

    if spec.family_id == FamilyId.VII:
        al, la, de = (fraction_to_mpf(p[k]) for k in ("alpha", "lam", "delta"))

        def weight(x, r):
            return mp.exp(al * x) * r ** (la - 1)

        return (
            (lambda x, r: x ** (de - 1) * weight(x, r), de - 1),
            (lambda x, r: x ** de * weight(x, r), de),
            la - 1,
            mpf(1)
        )

    raise ValueError(f"{spec.label}: quadrature seeds exist only for families V, VI and VII")


def _desingularized(integrand, exponent: mpf, length: mpf):
    """
    Integrand on (0, length) after t = u^m, m = 1/(exponent + 1), for t^exponent ends

    Returns:
        (function of u, new upper limit)
    """
    if exponent >= 0:
        return (lambda t: integrand(t) if t > 0 else mpf(0)), length
    m = 1 / (exponent + 1)
    return (
        lambda u: integrand(u ** m) * m * u ** (m - 1) if u > 0 else mpf(0),
        length ** (1 / m)
    )


def _integrate(integrand, left_exponent: mpf, right_exponent: mpf, upper: mpf, budget: mpf, label: str) -> mpf:
    """
    tanh-sinh quadrature over (0, U) split at U/2, raising the degree until two
    successive results agree within `budget`

    The right half runs in t = U - x so nodes crowd at t = 0 in full precision.

    Raises:
        QuadratureError: if no two successive degrees agree
    """
    half = upper / 2
    pieces = [
        _desingularized(lambda x: integrand(x, upper - x), left_exponent, half),
        _desingularized(lambda t: integrand(upper - t, t), right_exponent, half),
    ]

    previous = None
    for degree in QUADRATURE_DEGREES:
        value = mp.fsum(
            mp.quad(piece, [0, end], method="tanh-sinh", maxdegree=degree) for piece, end in pieces
        )
        if previous is not None and abs(value - previous) <= budget:
            logger.debug(f"{label}: settled at degree {degree}")
            return value
        previous = value
    raise QuadratureError(
        f"{label}: quadrature did not settle within {mp.nstr(budget, 3)} by degree {QUADRATURE_DEGREES[-1]}"
    )


def quadrature_AB(spec: FamilySpec, precision: Optional[int] = None) -> Tuple[mpf, mpf]:
    """
    Seed integrals A and B by tanh-sinh quadrature on (0, U)

    U is the root of the weight for family V and 1 for families VI and VII.
    The absolute error target is 10^(10 - precision).

    Raises:
        QuadratureError: when the target is not reached
    """
    precision, working = _working_digits(precision)
    with mp.workdps(working):
        (integrand_a, left_a), (integrand_b, left_b), right, upper = _quadrature_integrands(spec)
        budget = mpf(10) ** (10 - precision)
        seed_a = _integrate(integrand_a, left_a, right, upper, budget, f"{spec.label} A")
        seed_b = _integrate(integrand_b, left_b, right, upper, budget, f"{spec.label} B")
    logger.debug(f"{spec.label}: quadrature seeds computed at {working} digits")
    with mp.workdps(precision):
        return +seed_a, +seed_b


def seed_closed_forms(spec: FamilySpec) -> Optional[Tuple[mpf, mpf]]:
    """
    Closed-form seeds A, B for families II, III and IV (None otherwise)

    Values are computed at the current mpmath precision:
    II: A = ln((α+β)/α)/β, B = 1/β - (α/β)A;
    III: A as in the target, B = 1/β - (α/β)A;
    IV: A = (e^α - 1)/α, B = ((α-1)e^α + 1)/α².
    """
    p = spec.scheme_params()
    family_id = spec.family_id
    if spec.target.kind == TargetKind.DIVERGENT or not spec.target.real:
        return None

    if family_id in (FamilyId.II, FamilyId.II_MN):
        al, be = fraction_to_mpf(p["alpha"]), fraction_to_mpf(p["beta"])
        seed_a = mp.log((al + be) / al) / be
        return seed_a, 1 / be - al / be * seed_a
    if family_id in (FamilyId.III, FamilyId.III_LOG, FamilyId.III_MN):
        al, be = fraction_to_mpf(p["alpha"]), fraction_to_mpf(p["beta"])
        seed_a = 1 / (_arctan_value(p["alpha"], p["beta"]) - be)
        return seed_a, 1 / be - al / be * seed_a
    if family_id == FamilyId.IV:
        al = fraction_to_mpf(p["alpha"])
        return mp.expm1(al) / al, ((al - 1) * mp.exp(al) + 1) / al ** 2
    return None


def seed_moments(spec: FamilySpec, count: int) -> Optional[List[mpf]]:
    """
    Terms T_1..T_count of the sequence the family's rows relate

    Extends the closed-form seeds with the elementary reduction of each
    integral (x^k against the base integrand), independent of the rows:
    II: T_{k+1} = (1/k - αT_k)/β; III: T_{k+1} = (1/(2k-1) - αT_k)/β;
    IV: T_{k+1} = (e^α - kT_k)/α.
    """
    seeds = seed_closed_forms(spec)
    if seeds is None:
        return None
    p = spec.scheme_params()
    terms = [seeds[0]]
    family_id = spec.family_id
    for k in range(1, count):
        t = terms[-1]
        if family_id in (FamilyId.II, FamilyId.II_MN):
            al, be = fraction_to_mpf(p["alpha"]), fraction_to_mpf(p["beta"])
            terms.append((mpf(1) / k - al * t) / be)
        elif family_id == FamilyId.IV:
            al = fraction_to_mpf(p["alpha"])
            terms.append((mp.exp(al) - k * t) / al)
        else:
            al, be = fraction_to_mpf(p["alpha"]), fraction_to_mpf(p["beta"])
            terms.append((mpf(1) / (2 * k - 1) - al * t) / be)
    return terms


def bottom_up_truncation(cf: GeneralizedCF, n: int) -> Optional[Fraction]:
    """
    b0 + a1/(b1 + a2/(... + a_n/b_n)) folded exactly from level n upward

    Returns None when a division by zero occurs in the fold.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return cf.b0

    elements = cf.elements(n)
    if len(elements) < n:
        raise ValueError(f"{cf.label} has only {len(elements)} elements")

    tail = elements[-1][1]
    for k in range(n, 0, -1):
        if tail == 0:
            return None
        a_k = elements[k - 1][0]
        b_prev = cf.b0 if k == 1 else elements[k - 2][1]
        tail = b_prev + a_k / tail
    return tail


def entry_target(entry, precision: Optional[int] = None) -> mpf:
    """Catalog entry target: the family value pushed through the recipe's value map"""
    precision, working = _working_digits(precision)
    _, value_map = entry.build()
    with mp.workdps(working):
        value = value_map.apply(target_value(entry.spec, working))
    if value is None:
        raise DivergentTargetError(f"{entry.name}: the recipe maps the target to infinity")
    with mp.workdps(precision):
        return +value
