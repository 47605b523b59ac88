"""Data models for evaluation reports, targets and table records"""
from typing import Optional, List, Dict, Any, Tuple
from fractions import Fraction
from enum import Enum
from pydantic import BaseModel, ConfigDict, Field, field_validator


class Termination(str, Enum):
    """Why an evaluation stopped"""
    TOLERANCE_MET = "tolerance_met"
    MAX_DEPTH = "max_depth"
    DIVERGENCE_DETECTED = "divergence_detected"
    UNDEFINED_CONVERGENT_RUN = "undefined_convergent_run"


class FamilyId(str, Enum):
    """Euler's families of continued fractions"""
    I = "I"
    I_SIMPLE = "I_SIMPLE"
    II = "II"
    II_MN = "II_MN"
    III = "III"
    III_LOG = "III_LOG"
    III_MN = "III_MN"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"


class TargetKind(str, Enum):
    """Closed-form shape of a family's value"""
    SQRT_FORM = "sqrt_form"
    LOG_FORM = "log_form"
    ATAN_FORM = "atan_form"
    EXP_FORM = "exp_form"
    QUADRATURE_RATIO = "quadrature_ratio"
    DIVERGENT = "divergent"


class TargetDescriptor(BaseModel):
    """What the oracle must compute for a family instance"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: TargetKind = Field(..., description="Closed-form shape")
    formula: str = Field(..., description="Human-readable closed form")
    params: Dict[str, Fraction] = Field(default_factory=dict, description="Expression parameters")
    real: bool = Field(default=True, description="False when the closed form is not real")
    upper_limit_rule: Optional[str] = Field(
        None, description="How quadrature obtains its upper limit ('root' or 'one')"
    )

    @field_validator('upper_limit_rule')
    @classmethod
    def validate_upper_limit(cls, v, info):
        if info.data.get('kind') == TargetKind.QUADRATURE_RATIO and v not in ("root", "one"):
            raise ValueError("quadrature_ratio targets need upper_limit_rule 'root' or 'one'")
        return v


class EvalReport(BaseModel):
    """Result of evaluating a continued fraction to a tolerance"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str = Field(..., description="Fraction label")
    convergents: Tuple[Any, ...] = Field(..., description="Exact convergents, levels 0..depth_used")
    final_value: Optional[Any] = Field(None, description="Last defined convergent as an mpmath number")
    est_error: float = Field(..., description="|x_last - x_prev| over the last two defined values")
    bracketing: bool = Field(..., description="Consecutive differences alternate over the window")
    termination: Termination
    depth_used: int = Field(..., description="Deepest level computed")
    precision: int = Field(..., description="Digits of final_value")
    undefined_levels: List[int] = Field(default_factory=list, description="Levels with q = 0")

    @field_validator('est_error')
    @classmethod
    def validate_est_error(cls, v):
        if v < 0:
            raise ValueError("Estimated error must be nonnegative")
        return v

    @property
    def converged(self) -> bool:
        return self.termination == Termination.TOLERANCE_MET


class OutputRecord(BaseModel):
    """One row of a convergence table"""
    level: int
    p: str = Field(..., description="Numerator in lowest terms")
    q: str = Field(..., description="Denominator in lowest terms")
    value: str = Field(..., description="Decimal rendering or 'undef'")
    abs_diff: str = Field("", description="|x_k - x_prev| or empty")

    @field_validator('p', 'q')
    @classmethod
    def validate_integer_string(cls, v):
        if not v.lstrip('-').isdigit():
            raise ValueError("p and q must be exact integer strings")
        return v

    @field_validator('level')
    @classmethod
    def validate_level(cls, v):
        if v < 0:
            raise ValueError("Level must be >= 0")
        return v


class EvalSummary(BaseModel):
    """Closing line of a convergence table"""
    label: str
    termination: Termination
    depth_used: int
    value: Optional[str] = None
    target: Optional[str] = None
    abs_error: Optional[str] = None
    bracketing: bool = False


class VerificationResult(BaseModel):
    """Outcome of checking one identity against its oracle"""
    name: str = Field(..., description="Catalog name or ad-hoc family label")
    family_id: FamilyId
    passed: bool
    skipped: bool = Field(False, description="True when the target is not real")
    termination: Termination
    depth_used: int
    tolerance: float
    error: Optional[float] = Field(None, description="|cf - target| achieved")
    bracketing: bool = False
    rate_digits_per_level: Optional[float] = Field(None, description="Fitted convergence rate")
    target: Optional[str] = None
    value: Optional[str] = None
    message: str = ""

    @property
    def diverged(self) -> bool:
        return self.termination == Termination.DIVERGENCE_DETECTED


class VerificationSummary(BaseModel):
    """Aggregate of a verification run"""
    results: List[VerificationResult]
    precision: int

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> List[VerificationResult]:
        return [r for r in self.results if not r.passed and not r.skipped]

    def to_rows(self) -> List[Dict[str, Any]]:
        """Rows for tabular export"""
        return [r.model_dump(mode="json") for r in self.results]
