"""Value-preserving rewrites of continued fractions

Equivalence scaling ("depression") multiplies level k by c_k:
a_k' = c_k c_{k-1} a_k, b_k' = c_k b_k with c_0 = 1, which leaves every
convergent value unchanged. Head operations move between a fraction and its
tail and are tracked with Mobius value maps so catalog targets follow along.
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, List, NamedTuple, Optional, Tuple, Union

from core.continued_fraction import (
    ContinuedFractionError,
    GeneralizedCF,
    Rational,
    as_fraction,
    fraction_to_mpf,
)

logger = logging.getLogger(__name__)

ScaleFn = Callable[[int], Rational]


class Mobius(NamedTuple):
    """Value map v -> (a v + b)/(c v + d)"""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def identity(cls) -> 'Mobius':
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def head(cls, b0: Rational, a1: Rational) -> 'Mobius':
        """v -> b0 + a1/v"""
        return cls(as_fraction(b0), as_fraction(a1), Fraction(1), Fraction(0))

    @classmethod
    def tail(cls, b0: Rational, a1: Rational) -> 'Mobius':
        """v -> a1/(v - b0), the inverse of head(b0, a1)"""
        return cls(Fraction(0), as_fraction(a1), Fraction(1), -as_fraction(b0))

    def then(self, other: 'Mobius') -> 'Mobius':
        """Map applying self first, then other"""
        a, b, c, d = other
        return Mobius(
            a * self.a + b * self.c,
            a * self.b + b * self.d,
            c * self.a + d * self.c,
            c * self.b + d * self.d,
        )

    def apply(self, v):
        """Image of v (Fraction or mpmath number); None at the pole"""
        if isinstance(v, (int, Fraction)):
            num = self.a * v + self.b
            den = self.c * v + self.d
            return None if den == 0 else num / den
        num = fraction_to_mpf(self.a) * v + fraction_to_mpf(self.b)
        den = fraction_to_mpf(self.c) * v + fraction_to_mpf(self.d)
        return None if den == 0 else num / den

    def apply_pair(self, p: Fraction, q: Fraction) -> Tuple[Fraction, Fraction]:
        """Image of the projective point p:q, defined also where q = 0"""
        return self.a * p + self.b * q, self.c * p + self.d * q


def _checked_scale(scales: ScaleFn, k: int) -> Fraction:
    c = as_fraction(scales(k))
    if c == 0:
        raise ContinuedFractionError(f"Zero equivalence scale at level {k}")
    return c


def equivalence_scale(cf: GeneralizedCF, scales: Union[ScaleFn, Rational]) -> GeneralizedCF:
    """
    Rescale level k by c_k (a_k' = c_k c_{k-1} a_k, b_k' = c_k b_k, c_0 = 1)

    Args:
        cf: Input fraction
        scales: Function k -> c_k (k >= 1) or a constant

    Returns:
        Lazy fraction with identical convergent values

    Raises:
        ContinuedFractionError: if a scale is zero (checked eagerly for c_1)
    """
    if not callable(scales):
        constant = as_fraction(scales)
        scales = lambda k: constant  # noqa: E731

    if cf.has_level(1):
        _checked_scale(scales, 1)

    def element(k: int):
        a, b = cf.element(k)
        c_k = _checked_scale(scales, k)
        c_prev = _checked_scale(scales, k - 1) if k > 1 else Fraction(1)
        return c_k * c_prev * a, c_k * b

    return GeneralizedCF(cf.b0, element if cf.depth != 0 else None, cf.depth, f"scale({cf.label})")


def adjoin_head(cf: GeneralizedCF, b0_new: Rational, a1_new: Rational) -> GeneralizedCF:
    """
    Prefix a new head: value' = b0_new + a1_new/value; the old b0 becomes b1

    Raises:
        ContinuedFractionError: if a1_new = 0
    """
    b0_new, a1_new = as_fraction(b0_new), as_fraction(a1_new)
    if a1_new == 0:
        raise ContinuedFractionError("Adjoined partial numerator must be nonzero")

    def element(k: int):
        if k == 1:
            return a1_new, cf.b0
        return cf.element(k - 1)

    depth = None if cf.depth is None else cf.depth + 1
    return GeneralizedCF(b0_new, element, depth, f"head({cf.label})")


def drop_head(cf: GeneralizedCF) -> Tuple[Fraction, Fraction, GeneralizedCF]:
    """
    Split off b0 and a1; the tail starts at b1

    Returns:
        (b0, a1, tail) with adjoin_head(tail, b0, a1) reproducing cf

    Raises:
        ContinuedFractionError: for a fraction of depth 0
    """
    if not cf.has_level(1):
        raise ContinuedFractionError(f"{cf.label}: cannot drop the head of a depth-0 fraction")

    a1, b1 = cf.element(1)

    def element(k: int):
        return cf.element(k + 1)

    depth = None if cf.depth is None else cf.depth - 1
    tail = GeneralizedCF(b1, element if depth != 0 else None, depth, f"tail({cf.label})")
    return cf.b0, a1, tail


def alternate_signs(cf: GeneralizedCF) -> GeneralizedCF:
    """Equivalence scaling with c_k = (-1)^k"""
    result = equivalence_scale(cf, lambda k: -1 if k % 2 else 1)
    return result.relabel(f"altsign({cf.label})")


def _least_clearing_scale(u: Fraction, v: Fraction) -> Fraction:
    """Least positive c with c*u and c*v both integers (u != 0)"""
    if v == 0:
        return Fraction(u.denominator, abs(u.numerator))
    return Fraction(
        lcm(u.denominator, v.denominator),
        gcd(abs(u.numerator), abs(v.numerator))
    )


def clear_denominators(cf: GeneralizedCF, depth: Optional[int] = None) -> GeneralizedCF:
    """
    Make a_k, b_k integers with per-level content 1 for k <= depth (every level when None)

    c_k is the least positive rational making c_k c_{k-1} a_k and c_k b_k
    integral; levels beyond `depth` use c_k = 1.
    """
    if depth is not None and depth < 1:
        raise ValueError("depth must be >= 1")

    scales: List[Fraction] = [Fraction(1)]

    def scale(k: int) -> Fraction:
        while len(scales) <= k:
            level = len(scales)
            if depth is not None and level > depth:
                scales.append(Fraction(1))
                continue
            a, b = cf.element(level)
            scales.append(_least_clearing_scale(scales[level - 1] * a, b))
        return scales[k]

    def element(k: int):
        a, b = cf.element(k)
        c_k = scale(k)
        return c_k * scale(k - 1) * a, c_k * b

    logger.debug(f"Clearing denominators of {cf.label} to depth {depth}")
    return GeneralizedCF(cf.b0, element if cf.depth != 0 else None, cf.depth, f"cleardenom({cf.label})")
