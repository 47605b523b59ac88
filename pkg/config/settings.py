"""Configuration management for the Euler fraction workbench"""
import os
from pathlib import Path
from typing import Optional
from pydantic import BaseModel, Field, field_validator
from dotenv import load_dotenv

# Load environment variables (allow .env values to override existing vars)
project_root = Path(__file__).resolve().parent.parent
load_dotenv(dotenv_path=project_root / ".env", override=True)

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
OUTPUT_FORMATS = {"csv", "json", "xlsx"}


class PrecisionConfig(BaseModel):
    """Decimal precision used when rendering and cross-checking values"""
    digits: int = Field(default=50, description="Significant decimal digits for rendered values")
    guard_digits: int = Field(default=10, description="Extra working digits for oracle computations")

    @field_validator('digits')
    @classmethod
    def validate_digits(cls, v):
        if v < 10 or v > 10000:
            raise ValueError("Precision must be between 10 and 10000 digits")
        return v

    @field_validator('guard_digits')
    @classmethod
    def validate_guard_digits(cls, v):
        if v < 0:
            raise ValueError("Guard digits must be >= 0")
        return v

    @property
    def working_digits(self) -> int:
        """Digits used inside mpmath work contexts"""
        return self.digits + self.guard_digits


class EvaluationConfig(BaseModel):
    """Stopping and divergence rules for convergent evaluation"""
    divergence_window: int = Field(default=64, description="Levels inspected by the divergence heuristic")
    max_depth: int = Field(default=2000, description="Default maximum evaluation depth")
    min_monotone_order: float = Field(default=1.5, description="Smallest acceptable decay order of non-alternating differences")
    undefined_run_limit: int = Field(default=2, description="Consecutive q=0 levels tolerated before giving up")
    default_tol: float = Field(default=1e-12, description="Default consecutive-difference tolerance")

    @field_validator('divergence_window', 'max_depth')
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("Window and depth must be positive")
        return v

    @field_validator('default_tol')
    @classmethod
    def validate_tol(cls, v):
        if v <= 0:
            raise ValueError("Tolerance must be positive")
        return v


class OutputConfig(BaseModel):
    """Output configuration settings"""
    output_dir: Path = Field(default=Path("data/results"), description="Output directory for reports")
    default_format: str = Field(default="csv", description="Default table format")

    @field_validator('default_format')
    @classmethod
    def validate_format(cls, v):
        v = v.lower()
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {sorted(OUTPUT_FORMATS)}")
        return v


class RuntimeConfig(BaseModel):
    """Process-level settings"""
    workers: int = Field(default=1, description="Worker processes for 'verify all'")
    log_level: str = Field(default="INFO", description="Root logging level")
    log_file: Optional[Path] = Field(default=None, description="Optional log file")

    @field_validator('workers')
    @classmethod
    def validate_workers(cls, v):
        if v < 1 or v > 64:
            raise ValueError("Workers must be between 1 and 64")
        return v

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v):
        v = v.upper()
        if v not in LOG_LEVELS:
            raise ValueError(f"Log level must be one of {sorted(LOG_LEVELS)}")
        return v


class Settings(BaseModel):
    """Main settings container"""
    precision: PrecisionConfig = PrecisionConfig()
    evaluation: EvaluationConfig = EvaluationConfig()
    output: OutputConfig = OutputConfig()
    runtime: RuntimeConfig = RuntimeConfig()

    @classmethod
    def load_from_env(cls) -> 'Settings':
        """Load settings from environment variables"""
        precision_config = PrecisionConfig(
            digits=int(os.getenv("CF_PRECISION", "50")),
            guard_digits=int(os.getenv("CF_GUARD_DIGITS", "10"))
        )

        evaluation_config = EvaluationConfig(
            divergence_window=int(os.getenv("CF_DIVERGENCE_WINDOW", "64")),
            max_depth=int(os.getenv("CF_MAX_DEPTH", "2000")),
            min_monotone_order=float(os.getenv("CF_MIN_MONOTONE_ORDER", "1.5")),
            undefined_run_limit=int(os.getenv("CF_UNDEFINED_RUN_LIMIT", "2")),
            default_tol=float(os.getenv("CF_DEFAULT_TOL", "1e-12"))
        )

        output_config = OutputConfig(
            output_dir=Path(os.getenv("CF_OUTPUT_DIR", "data/results")),
            default_format=os.getenv("CF_DEFAULT_FORMAT", "csv")
        )

        log_file = os.getenv("CF_LOG_FILE", "").strip()
        runtime_config = RuntimeConfig(
            workers=int(os.getenv("CF_WORKERS", "1")),
            log_level=os.getenv("CF_LOG_LEVEL", "INFO"),
            log_file=Path(log_file) if log_file else None
        )

        return cls(
            precision=precision_config,
            evaluation=evaluation_config,
            output=output_config,
            runtime=runtime_config
        )


# Singleton instance
settings = None


def get_settings() -> Settings:
    """Get or create settings instance"""
    global settings
    if settings is None:
        settings = Settings.load_from_env()
    return settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment"""
    global settings
    settings = None
