"""Exact-arithmetic generalized continued fractions and their convergents

A fraction is ``b0 + a1/(b1 + a2/(b2 + ...))``. Elements are produced lazily by a
pure function of the level ``k >= 1``; convergents ``p_k/q_k`` follow the
fundamental recurrence and are always exact ``Fraction`` pairs. Floating
rendering (mpmath) happens only when a report is assembled.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, List, NamedTuple, Optional, Tuple, Union

from mpmath import mp, mpf

from config.settings import get_settings
from core.models import EvalReport, Termination

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
ElementFn = Callable[[int], Tuple[Rational, Rational]]


class ContinuedFractionError(ValueError):
    """Raised when a fraction violates a structural invariant"""


def as_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce ints, Fractions and 'num/den' strings to a reduced Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"Refusing inexact value {value!r}; use an int, Fraction or 'num/den' string")
    return Fraction(value)


def fraction_to_mpf(value: Rational) -> mpf:
    """Exact rational rendered at the current mpmath precision"""
    value = as_fraction(value)
    return mpf(value.numerator) / value.denominator


class Convergent(NamedTuple):
    """Exact convergent p_k/q_k at a given level"""
    level: int
    p: Fraction
    q: Fraction

    @property
    def defined(self) -> bool:
        return self.q != 0

    @property
    def value(self) -> Optional[Fraction]:
        """p/q exactly, or None when q = 0"""
        if self.q == 0:
            return None
        return self.p / self.q

    def to_mpf(self) -> Optional[mpf]:
        """Value at the current mpmath precision without reducing p/q first"""
        if self.q == 0:
            return None
        num = self.p.numerator * self.q.denominator
        den = self.p.denominator * self.q.numerator
        return mpf(num) / mpf(den)


class GeneralizedCF:
    """
    Generalized continued fraction with a lazily generated tail.

    Args:
        b0: Leading term
        element: Pure function k -> (a_k, b_k) for k >= 1
        depth: Number of elements for a finite fraction (None for infinite)
        label: Human-readable name used in logs and tables
    """

    __slots__ = ("b0", "depth", "label", "_element")

    def __init__(
        self,
        b0: Rational,
        element: Optional[ElementFn] = None,
        depth: Optional[int] = None,
        label: str = "cf"
    ):
        if element is None:
            depth = 0
        if depth is not None and depth < 0:
            raise ContinuedFractionError("Depth must be >= 0")
        self.b0 = as_fraction(b0)
        self.depth = depth
        self.label = label
        self._element = lru_cache(maxsize=None)(element) if element is not None else None

    @classmethod
    def from_elements(
        cls,
        b0: Rational,
        elements: List[Tuple[Rational, Rational]],
        label: str = "finite"
    ) -> 'GeneralizedCF':
        """Build a finite fraction from an explicit list of (a_k, b_k)"""
        frozen = tuple((as_fraction(a), as_fraction(b)) for a, b in elements)
        if not frozen:
            return cls(b0, None, 0, label)
        return cls(b0, lambda k: frozen[k - 1], len(frozen), label)

    def has_level(self, k: int) -> bool:
        return k >= 1 and (self.depth is None or k <= self.depth)

    def element(self, k: int) -> Tuple[Fraction, Fraction]:
        """
        Partial numerator and denominator at level k

        Raises:
            ContinuedFractionError: if k is outside the fraction or a_k = 0
        """
        if not self.has_level(k):
            raise ContinuedFractionError(f"{self.label}: no element at level {k} (depth={self.depth})")
        a, b = self._element(k)
        a, b = as_fraction(a), as_fraction(b)
        if a == 0:
            raise ContinuedFractionError(
                f"{self.label}: zero partial numerator at level {k}; build a finite fraction of depth {k - 1} instead"
            )
        return a, b

    def elements(self, n: int) -> List[Tuple[Fraction, Fraction]]:
        """Materialize (a_k, b_k) for k = 1..n, stopping early for finite fractions"""
        last = n if self.depth is None else min(n, self.depth)
        return [self.element(k) for k in range(1, last + 1)]

    def truncate(self, depth: int) -> 'GeneralizedCF':
        """Finite fraction keeping the first `depth` elements"""
        if self.depth is not None:
            depth = min(depth, self.depth)
        return GeneralizedCF(self.b0, self._element if depth > 0 else None, depth, f"{self.label}[:{depth}]")

    def relabel(self, label: str) -> 'GeneralizedCF':
        return GeneralizedCF(self.b0, self._element, self.depth, label)

    def __repr__(self) -> str:
        shown = ", ".join(f"({a}, {b})" for a, b in self.elements(3))
        tail = "" if self.depth is not None and self.depth <= 3 else ", ..."
        return f"GeneralizedCF({self.label}: b0={self.b0}; {shown}{tail})"


def iter_convergents(cf: GeneralizedCF) -> Iterator[Convergent]:
    """Yield convergents for levels 0, 1, 2, ... until the fraction ends"""
    p_prev, q_prev = Fraction(1), Fraction(0)
    p, q = cf.b0, Fraction(1)
    yield Convergent(0, p, q)

    k = 1
    while cf.has_level(k):
        a, b = cf.element(k)
        p_prev, p = p, b * p + a * p_prev
        q_prev, q = q, b * q + a * q_prev
        yield Convergent(k, p, q)
        k += 1


def convergents(cf: GeneralizedCF, n: int) -> List[Convergent]:
    """
    Convergents for levels 0..n (fewer when the fraction is finite and shorter)

    Args:
        cf: Continued fraction
        n: Last level to compute

    Returns:
        List of exact convergents; levels with q = 0 carry no value
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    result = []
    for convergent in iter_convergents(cf):
        result.append(convergent)
        if convergent.level >= n:
            break
    return result


def convergent_at(cf: GeneralizedCF, k: int) -> Convergent:
    """Convergent at level k, equal to element k of convergents(cf, k)"""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > 0 and not cf.has_level(k):
        raise ContinuedFractionError(f"{cf.label}: level {k} is beyond depth {cf.depth}")
    return convergents(cf, k)[k]


def _alternates(diffs: List[mpf]) -> bool:
    return len(diffs) >= 2 and all(d1 * d2 < 0 for d1, d2 in zip(diffs, diffs[1:]))


def _window_diverges(
    levels: List[int],
    diffs: List[mpf],
    min_order: float
) -> bool:
    """
    Decide divergence from a window of consecutive differences.

    Alternating windows bracket their limit, so only a failure to shrink counts.
    Otherwise the differences must decay with at least `min_order`.
    """
    d_old, d_new = abs(diffs[0]), abs(diffs[-1])
    if d_new == 0:
        return False
    if _alternates(diffs):
        return d_new >= d_old
    if d_old == 0 or d_new >= d_old:
        return True
    order = float(mp.log(d_old / d_new)) / math.log(levels[-1] / levels[0])
    return order < min_order


def eval_to_tolerance(
    cf: GeneralizedCF,
    tol: float,
    max_depth: Optional[int] = None,
    precision: Optional[int] = None,
    window: Optional[int] = None,
    min_order: Optional[float] = None,
    undefined_run_limit: Optional[int] = None
) -> EvalReport:
    """
    Extend convergents until two consecutive differences fall below `tol`

    Args:
        cf: Continued fraction
        tol: Consecutive-difference tolerance (> 0)
        max_depth: Deepest level evaluated (settings default)
        precision: Decimal digits of the rendered final value (settings default)
        window: Divergence window length (settings default)
        min_order: Minimum decay order of non-alternating differences
        undefined_run_limit: Consecutive q = 0 levels tolerated

    Returns:
        EvalReport with exact convergents and diagnostics
    """
    if tol <= 0:
        raise ValueError("Tolerance must be positive")

    settings = get_settings()
    max_depth = max_depth or settings.evaluation.max_depth
    precision = precision or settings.precision.digits
    window = window or settings.evaluation.divergence_window
    min_order = min_order if min_order is not None else settings.evaluation.min_monotone_order
    undefined_run_limit = (
        undefined_run_limit if undefined_run_limit is not None else settings.evaluation.undefined_run_limit
    )
    working = precision + settings.precision.guard_digits

    collected: List[Convergent] = []
    undefined_levels: List[int] = []
    diff_levels: List[int] = []
    diffs: List[mpf] = []
    termination = Termination.MAX_DEPTH
    undefined_run = 0
    previous_value = None
    # differences only count toward the stop rule between adjacent defined levels
    small_streak = 0
    last_adjacent = 0

    with mp.workdps(working):
        tol_mp = mpf(tol)
        for convergent in iter_convergents(cf):
            collected.append(convergent)
            k = convergent.level

            value = convergent.to_mpf()
            if value is None:
                undefined_levels.append(k)
                undefined_run += 1
                small_streak = 0
                logger.debug(f"{cf.label}: q = 0 at level {k}")
                if undefined_run > undefined_run_limit:
                    termination = Termination.UNDEFINED_CONVERGENT_RUN
                    break
            else:
                adjacent = undefined_run == 0 and previous_value is not None
                undefined_run = 0
                if previous_value is not None:
                    diffs.append(value - previous_value)
                    diff_levels.append(k)
                previous_value = value

                if adjacent:
                    last_adjacent = k
                    small_streak = small_streak + 1 if abs(diffs[-1]) < tol_mp else 0
                    if small_streak >= 2:
                        termination = Termination.TOLERANCE_MET
                        break

                if len(diffs) > window and _window_diverges(
                    diff_levels[-window - 1:], diffs[-window - 1:], min_order
                ):
                    termination = Termination.DIVERGENCE_DETECTED
                    logger.warning(f"{cf.label}: divergence detected at level {k}")
                    break

            if k - last_adjacent > window:
                # undefined levels keep interrupting: no two neighbours to compare
                termination = Termination.DIVERGENCE_DETECTED
                logger.warning(f"{cf.label}: no adjacent defined convergents in {window} levels at level {k}")
                break

            if k >= max_depth:
                break

        est_error = float(abs(diffs[-1])) if diffs else 0.0
        bracketing = _alternates(diffs[-window:])

    last_defined = next((c for c in reversed(collected) if c.defined), None)
    final_value = None
    if last_defined is not None and termination != Termination.DIVERGENCE_DETECTED:
        with mp.workdps(precision):
            final_value = last_defined.to_mpf()

    report = EvalReport(
        label=cf.label,
        convergents=tuple(collected),
        final_value=final_value,
        est_error=est_error,
        bracketing=bracketing,
        termination=termination,
        depth_used=collected[-1].level,
        precision=precision,
        undefined_levels=undefined_levels
    )
    logger.info(
        f"{cf.label}: {termination.value} at level {report.depth_used} (est_error={est_error:.3e})"
    )
    return report
