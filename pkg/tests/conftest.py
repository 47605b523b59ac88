"""Shared fixtures for the test suite"""
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config.settings import reset_settings  # noqa: E402
from core.continued_fraction import GeneralizedCF  # noqa: E402

PROPERTY_CASES = 120


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees default settings unless it sets CF_* itself"""
    for name in ("CF_PRECISION", "CF_WORKERS", "CF_LOG_FILE", "CF_MAX_DEPTH", "CF_DEFAULT_FORMAT"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return random.Random(1737)


def _rational(rng: random.Random, positive: bool) -> Fraction:
    value = Fraction(rng.randint(1, 9), rng.randint(1, 4))
    if not positive and rng.random() < 0.5:
        value = -value
    return value


@pytest.fixture
def random_cf():
    """Factory for finite fractions with small random rational elements"""
    def build(rng: random.Random, depth: int, positive: bool = True) -> GeneralizedCF:
        b0 = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        elements = [(_rational(rng, positive), _rational(rng, positive)) for _ in range(depth)]
        return GeneralizedCF.from_elements(b0, elements, label="random")
    return build
