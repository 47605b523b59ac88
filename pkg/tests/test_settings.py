"""Tests for environment-driven settings"""
from pathlib import Path

import pytest
from pydantic import ValidationError

from config.settings import EvaluationConfig, PrecisionConfig, RuntimeConfig, Settings, get_settings, reset_settings


def test_defaults():
    settings = get_settings()
    assert settings.precision.digits == 50
    assert settings.precision.working_digits == 60
    assert settings.evaluation.divergence_window == 64
    assert settings.evaluation.min_monotone_order == 1.5
    assert settings.runtime.workers == 1
    assert settings.runtime.log_file is None
    assert settings.output.default_format == "csv"


def test_settings_are_cached_until_reset(monkeypatch):
    first = get_settings()
    monkeypatch.setenv("CF_PRECISION", "80")
    assert get_settings() is first
    reset_settings()
    assert get_settings().precision.digits == 80


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("CF_WORKERS", "4")
    monkeypatch.setenv("CF_LOG_LEVEL", "debug")
    monkeypatch.setenv("CF_LOG_FILE", str(tmp_path / "cf.log"))
    monkeypatch.setenv("CF_DEFAULT_FORMAT", "JSON")
    settings = Settings.load_from_env()
    assert settings.runtime.workers == 4
    assert settings.runtime.log_level == "DEBUG"
    assert settings.runtime.log_file == Path(tmp_path / "cf.log")
    assert settings.output.default_format == "json"


@pytest.mark.parametrize("build", [
    lambda: PrecisionConfig(digits=5),
    lambda: PrecisionConfig(guard_digits=-1),
    lambda: EvaluationConfig(divergence_window=0),
    lambda: EvaluationConfig(default_tol=0),
    lambda: RuntimeConfig(workers=0),
    lambda: RuntimeConfig(log_level="LOUD"),
])
def test_invalid_values_are_rejected(build):
    with pytest.raises(ValidationError):
        build()


def test_bad_environment_value_fails_loading(monkeypatch):
    monkeypatch.setenv("CF_DEFAULT_FORMAT", "pdf")
    with pytest.raises(ValidationError):
        Settings.load_from_env()
