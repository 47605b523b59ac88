"""Verification manager for running catalog checks across worker processes"""
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from typing import List, Optional, Sequence

from analysis.verifier import verify_entry
from config.catalog import get_entry
from config.settings import get_settings
from core.models import Termination, VerificationResult, VerificationSummary

logger = logging.getLogger(__name__)


def _verify_by_name(name: str, precision: int, depth: Optional[int]) -> VerificationResult:
    """Worker entry point; catalog entries hold lambdas, so only names cross processes"""
    return verify_entry(get_entry(name), precision, depth)


class VerificationManager:
    """Fans catalog verification out over a process pool, keeping catalog order"""

    def __init__(self, workers: Optional[int] = None, precision: Optional[int] = None):
        """
        Initialize verification manager

        Args:
            workers: Worker processes (settings default; 1 runs in-process)
            precision: Decimal digits for every verification
        """
        settings = get_settings()
        self.workers = workers or settings.runtime.workers
        self.precision = precision or settings.precision.digits

    async def run(self, names: Sequence[str], depth: Optional[int] = None) -> VerificationSummary:
        """
        Verify the named entries

        Args:
            names: Catalog names, in output order
            depth: Optional depth override for every entry

        Returns:
            VerificationSummary with results in the order of `names`
        """
        start_time = datetime.now()

        if self.workers <= 1:
            results = [_verify_by_name(name, self.precision, depth) for name in names]
        else:
            results = await self._run_pool(names, depth)

        duration = (datetime.now() - start_time).total_seconds()
        passed = sum(1 for r in results if r.passed)
        logger.info(f"Verified {len(results)} entries in {duration:.1f}s ({passed} passed)")
        return VerificationSummary(results=results, precision=self.precision)

    async def _run_pool(self, names: Sequence[str], depth: Optional[int]) -> List[VerificationResult]:
        loop = asyncio.get_running_loop()
        semaphore = asyncio.Semaphore(self.workers)

        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            async def limited_verify(name: str):
                async with semaphore:
                    return await loop.run_in_executor(pool, _verify_by_name, name, self.precision, depth)

            tasks = [limited_verify(name) for name in names]
            outcomes = await asyncio.gather(*tasks, return_exceptions=True)

        results = []
        for name, outcome in zip(names, outcomes):
            if isinstance(outcome, Exception):
                logger.error(f"Verification of {name} failed: {outcome}")
                results.append(self._error_result(name, outcome))
            else:
                results.append(outcome)
        return results

    @staticmethod
    def _error_result(name: str, error: Exception) -> VerificationResult:
        entry = get_entry(name)
        return VerificationResult(
            name=name,
            family_id=entry.family_id,
            passed=False,
            termination=Termination.MAX_DEPTH,
            depth_used=0,
            tolerance=entry.tolerance,
            message=f"error: {error}"
        )
