"""Check fractions against their oracle values"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from mpmath import mp, mpf

from analysis.oracle import QuadratureError, entry_target, target_value
from config.catalog import CatalogEntry, catalog, get_entries_by_family, get_entry
from config.settings import get_settings
from core.continued_fraction import GeneralizedCF, eval_to_tolerance
from core.families import FamilySpec
from core.models import (
    EvalReport,
    FamilyId,
    TargetKind,
    Termination,
    VerificationResult,
    VerificationSummary,
)

logger = logging.getLogger(__name__)

# Consecutive differences must settle this far below the tolerance before stopping
STOP_MARGIN = 1e-3
RATE_WINDOW = 100
DEFAULT_FAMILY_TOLERANCE = 1e-8


def fit_convergence_rate(report: EvalReport, target: mpf, window: int = RATE_WINDOW) -> Optional[float]:
    """
    Observed convergence rate in decimal digits per level

    Least-squares slope of log10 |x_k - target| over the last `window`
    defined convergents; None when fewer than three usable errors remain.
    """
    levels, log_errors = [], []
    floor = mpf(10) ** (-report.precision)
    for convergent in report.convergents[-window:]:
        value = convergent.to_mpf()
        if value is None:
            continue
        error = abs(value - target)
        if error <= floor:
            continue
        levels.append(convergent.level)
        log_errors.append(float(mp.log10(error)))

    if len(levels) < 3:
        return None
    slope, _ = np.polyfit(np.asarray(levels, dtype=float), np.asarray(log_errors), 1)
    return float(-slope)


def _verify_fraction(
    name: str,
    spec: FamilySpec,
    cf: GeneralizedCF,
    target_fn,
    tolerance: float,
    depth: int,
    precision: int,
    expected: Termination
) -> VerificationResult:
    family_id = spec.family_id

    if spec.target.kind == TargetKind.DIVERGENT or expected == Termination.DIVERGENCE_DETECTED:
        report = eval_to_tolerance(cf, tol=tolerance, max_depth=depth, precision=precision)
        passed = report.termination == Termination.DIVERGENCE_DETECTED
        message = (
            f"divergence detected at level {report.depth_used}" if passed
            else f"expected divergence, got {report.termination.value}"
        )
        return VerificationResult(
            name=name,
            family_id=family_id,
            passed=passed,
            termination=report.termination,
            depth_used=report.depth_used,
            tolerance=tolerance,
            bracketing=report.bracketing,
            target="divergent",
            message=message
        )

    if not spec.target.real:
        logger.warning(f"{name}: target {spec.target.formula} is not real, verification skipped")
        return VerificationResult(
            name=name,
            family_id=family_id,
            passed=False,
            skipped=True,
            termination=Termination.MAX_DEPTH,
            depth_used=0,
            tolerance=tolerance,
            message="non-real target"
        )

    with mp.workdps(precision + get_settings().precision.guard_digits):
        try:
            target = target_fn()
        except QuadratureError as e:
            logger.warning(f"{name}: FAILED ({e})")
            return VerificationResult(
                name=name,
                family_id=family_id,
                passed=False,
                termination=Termination.MAX_DEPTH,
                depth_used=0,
                tolerance=tolerance,
                message=str(e)
            )
        report = eval_to_tolerance(cf, tol=tolerance * STOP_MARGIN, max_depth=depth, precision=precision)

        if report.final_value is None:
            error = None
            passed = False
            message = f"no defined convergent ({report.termination.value})"
            rate = None
        else:
            error_mp = abs(report.final_value - target)
            error = float(error_mp)
            passed = (
                report.termination in (Termination.TOLERANCE_MET, Termination.MAX_DEPTH)
                and error_mp < tolerance
            )
            message = f"|cf - target| = {mp.nstr(error_mp, 5)}"
            rate = fit_convergence_rate(report, target)

    result = VerificationResult(
        name=name,
        family_id=family_id,
        passed=passed,
        termination=report.termination,
        depth_used=report.depth_used,
        tolerance=tolerance,
        error=error,
        bracketing=report.bracketing,
        rate_digits_per_level=rate,
        target=mp.nstr(target, 25),
        value=mp.nstr(report.final_value, 25) if report.final_value is not None else None,
        message=message
    )
    if passed:
        logger.info(f"{name}: passed ({message}, depth {report.depth_used})")
    else:
        logger.warning(f"{name}: FAILED ({message}, {report.termination.value})")
    return result


def verify_entry(
    entry: CatalogEntry,
    precision: Optional[int] = None,
    depth: Optional[int] = None
) -> VerificationResult:
    """
    Evaluate a catalog entry and compare it with its oracle value

    Args:
        entry: Catalog entry
        precision: Decimal digits (settings default)
        depth: Maximum evaluation depth (the entry's schedule by default)

    Returns:
        VerificationResult; divergent entries pass when divergence is detected
    """
    precision = precision or get_settings().precision.digits
    cf, _ = entry.build()
    return _verify_fraction(
        name=entry.name,
        spec=entry.spec,
        cf=cf,
        target_fn=lambda: entry_target(entry, precision),
        tolerance=entry.tolerance,
        depth=depth or entry.depth,
        precision=precision,
        expected=entry.expected
    )


def verify_family(
    spec: FamilySpec,
    tolerance: float = DEFAULT_FAMILY_TOLERANCE,
    depth: Optional[int] = None,
    precision: Optional[int] = None
) -> VerificationResult:
    """Verify an ad-hoc family member against its target"""
    settings = get_settings()
    precision = precision or settings.precision.digits
    return _verify_fraction(
        name=spec.label,
        spec=spec,
        cf=spec.cf,
        target_fn=lambda: target_value(spec, precision),
        tolerance=tolerance,
        depth=depth or settings.evaluation.max_depth,
        precision=precision,
        expected=Termination.TOLERANCE_MET
    )


def select_entries(selector: str) -> List[CatalogEntry]:
    """
    Resolve 'all', a family id (e.g. 'IV' or 'family_IV') or a catalog name

    Raises:
        UnknownEntryError: when nothing matches
    """
    if selector == "all":
        return list(catalog())
    family_name = selector[len("family_"):] if selector.startswith("family_") else selector
    if family_name in FamilyId.__members__:
        return get_entries_by_family(FamilyId(family_name))
    return [get_entry(selector)]


def verify_entries(
    entries: Sequence[CatalogEntry],
    precision: Optional[int] = None,
    depth: Optional[int] = None
) -> VerificationSummary:
    """Verify entries sequentially, in the given order"""
    precision = precision or get_settings().precision.digits
    results = [verify_entry(entry, precision, depth) for entry in entries]
    return VerificationSummary(results=results, precision=precision)
