"""Euler's parameterized families of continued fractions

Each constructor checks the parameter domain, builds the coefficient rows of
the family's three-term recurrence, turns them into a continued fraction and
attaches a descriptor of the closed form (or quadrature ratio) the fraction
converges to. Families II, III and IV carry the supplied head, so their
fraction's value is the documented target rather than f_1 A/B.
"""
import logging
from fractions import Fraction
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from core.continued_fraction import GeneralizedCF, Rational, as_fraction
from core.models import FamilyId, TargetDescriptor, TargetKind
from core.recurrence import RecurrenceScheme, cf_from_recurrence
from core.transforms import adjoin_head

logger = logging.getLogger(__name__)

PARAM_SYMBOLS: Dict[str, str] = {
    "alpha": "α",
    "beta": "β",
    "gamma": "γ",
    "delta": "δ",
    "epsilon": "ε",
    "theta": "θ",
    "lam": "λ",
    "a": "a",
    "b": "b",
    "c": "c",
    "m": "m",
    "n": "n",
}

# Accepted spellings on the command line
PARAM_ALIASES: Dict[str, str] = {
    **{name: name for name in PARAM_SYMBOLS},
    **{symbol: name for name, symbol in PARAM_SYMBOLS.items()},
    "lambda": "lam",
    "eps": "epsilon",
}


class FamilyDomainError(ValueError):
    """Raised when family parameters fall outside the family's domain"""


class FamilySpec(BaseModel):
    """A family member: its recurrence, its fraction and what the fraction equals"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    family_id: FamilyId
    params: Dict[str, Fraction] = Field(..., description="Family parameters by ASCII name")
    target: TargetDescriptor
    scheme: RecurrenceScheme = Field(..., description="Coefficient rows f_k, g_k, h_k")
    cf: GeneralizedCF = Field(..., description="Fraction whose value is the target")
    head_supplied: bool = Field(False, description="True when cf carries an adjoined head")
    label: str

    def param(self, name: str) -> Fraction:
        return self.params[name]

    def scheme_params(self) -> Dict[str, Fraction]:
        """Parameters in the base family's (α, β) form for the (m, n) variants"""
        if self.family_id == FamilyId.II_MN:
            m, n = self.params["m"], self.params["n"]
            return {"alpha": n - m, "beta": 2 * m}
        if self.family_id == FamilyId.III_MN:
            m, n = self.params["m"], self.params["n"]
            return {"alpha": m + n, "beta": n - m}
        return dict(self.params)

    def display_params(self) -> str:
        """Parameters as 'α=1 β=1'"""
        return " ".join(f"{PARAM_SYMBOLS.get(k, k)}={v}" for k, v in self.params.items())


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise FamilyDomainError(message)


def _params(**values: Rational) -> Dict[str, Fraction]:
    return {name: as_fraction(value) for name, value in values.items()}


def _label(family_id: FamilyId, params: Dict[str, Fraction]) -> str:
    shown = ", ".join(f"{PARAM_SYMBOLS.get(k, k)}={v}" for k, v in params.items())
    return f"family_{family_id.value}({shown})"


def _build(
    family_id: FamilyId,
    params: Dict[str, Fraction],
    scheme: RecurrenceScheme,
    target: TargetDescriptor,
    head: Optional[tuple] = None,
    depth: Optional[int] = None
) -> FamilySpec:
    label = _label(family_id, params)
    cf = cf_from_recurrence(scheme, depth=depth)
    if head is not None:
        cf = adjoin_head(cf, *head)
    logger.debug(f"Constructed {label}")
    return FamilySpec(
        family_id=family_id,
        params=params,
        target=target,
        scheme=scheme,
        cf=cf.relabel(label),
        head_supplied=head is not None,
        label=label
    )


def family_I(alpha: Rational, beta: Rational, gamma: Rational) -> FamilySpec:
    """
    Rows f_k = kα, g_k = (k+1)β, h_k = (k+2)γ

    The fraction 2β + 6αγ/(3β + 12αγ/(4β + ...)) equals β + √(β² + 4αγ)
    (the root sign follows β). A negative discriminant yields a non-real target.
    """
    p = _params(alpha=alpha, beta=beta, gamma=gamma)
    _require(p["alpha"] != 0, "Family I needs α ≠ 0")
    _require(p["gamma"] != 0, "Family I needs γ ≠ 0")
    al, be, ga = p["alpha"], p["beta"], p["gamma"]

    scheme = RecurrenceScheme(
        lambda k: (k * al, (k + 1) * be, (k + 2) * ga),
        seed_descriptor="A = ∫dx, B = ∫x dx up to the root of α - βx - γx²",
        label="family_I"
    )
    target = TargetDescriptor(
        kind=TargetKind.SQRT_FORM,
        formula="β + sgn(β)·√(β² + 4αγ)",
        params=p,
        real=be * be + 4 * al * ga >= 0
    )
    return _build(FamilyId.I, p, scheme, target)


def family_I_simple(beta: Rational, epsilon: Rational) -> FamilySpec:
    """Constant rows (1, β, ε): β + ε/(β + ε/(β + ...)), the root of z = β + ε/z"""
    p = _params(beta=beta, epsilon=epsilon)
    be, ep = p["beta"], p["epsilon"]
    _require(ep != 0, "Simple family I needs ε ≠ 0")
    _require(be != 0 or ep > 0, "Simple family I needs β ≠ 0 or ε > 0")

    scheme = RecurrenceScheme(
        lambda k: (1, be, ep),
        seed_descriptor="A_k = x^(k-1) with x a root of 1 = βx + εx²",
        label="family_I_SIMPLE"
    )
    target = TargetDescriptor(
        kind=TargetKind.SQRT_FORM,
        formula="½(β + sgn(β)·√(β² + 4ε))",
        params=p,
        real=be * be + 4 * ep >= 0
    )
    return _build(FamilyId.I_SIMPLE, p, scheme, target)


def _log_scheme(al: Fraction, be: Fraction) -> RecurrenceScheme:
    return RecurrenceScheme(
        lambda k: (k * al, (k + 1) * al - k * be, (k + 1) * be),
        seed_descriptor="A = ∫dx/(α+βx), B = ∫x dx/(α+βx) over [0, 1]",
        label="family_II"
    )


def _log_target(p: Dict[str, Fraction]) -> TargetDescriptor:
    return TargetDescriptor(
        kind=TargetKind.LOG_FORM,
        formula="β / ln((α+β)/α)",
        params=p
    )


def family_II(alpha: Rational, beta: Rational) -> FamilySpec:
    """
    Rows f_k = kα, g_k = (k+1)α - kβ, h_k = (k+1)β with head (α, αβ)

    α + αβ/((2α-β) + 4αβ/((3α-2β) + ...)) = β/ln((α+β)/α)
    """
    p = _params(alpha=alpha, beta=beta)
    al, be = p["alpha"], p["beta"]
    _require(al > 0, "Family II needs α > 0")
    _require(al + be > 0, "Family II needs α + β > 0")
    _require(be != 0, "Family II needs β ≠ 0")
    return _build(FamilyId.II, p, _log_scheme(al, be), _log_target(p), head=(al, al * be))


def family_II_mn(m: Rational, n: Rational) -> FamilySpec:
    """Family II at α = n - m, β = 2m: value 2m/ln((n+m)/(n-m))"""
    p = _params(m=m, n=n)
    _require(p["n"] > p["m"] > 0, "Family II (m, n) needs n > m > 0")
    al, be = p["n"] - p["m"], 2 * p["m"]
    target = TargetDescriptor(kind=TargetKind.LOG_FORM, formula="2m / ln((n+m)/(n-m))", params=p)
    return _build(FamilyId.II_MN, p, _log_scheme(al, be), target, head=(al, al * be))


def _arctan_scheme(al: Fraction, be: Fraction) -> RecurrenceScheme:
    return RecurrenceScheme(
        lambda k: ((2 * k - 1) * al, (2 * k + 1) * al - (2 * k - 1) * be, (2 * k + 1) * be),
        seed_descriptor="A = ∫dx/(α+βx²), B = ∫x² dx/(α+βx²) over [0, 1]",
        label="family_III"
    )


def family_III(alpha: Rational, beta: Rational) -> FamilySpec:
    """
    Rows f_k = (2k-1)α, g_k = (2k+1)α - (2k-1)β, h_k = (2k+1)β with head (α+β, αβ)

    The value is β + 1/A. For β > 0, A = atan(√(β/α))/√(αβ); for β = -γ < 0,
    A = ln((√α+√γ)/(√α-√γ))/(2√(αγ)), real only when α > γ. At α = γ the
    fraction diverges and the descriptor says so.
    """
    p = _params(alpha=alpha, beta=beta)
    al, be = p["alpha"], p["beta"]
    _require(al > 0, "Family III needs α > 0")
    _require(be != 0, "Family III needs β ≠ 0")

    if be > 0:
        family_id = FamilyId.III
        target = TargetDescriptor(
            kind=TargetKind.ATAN_FORM,
            formula="β + √(αβ)/atan√(β/α)",
            params=p
        )
    elif al == -be:
        family_id = FamilyId.III_LOG
        target = TargetDescriptor(
            kind=TargetKind.DIVERGENT,
            formula="no finite value (α = γ)",
            params=p,
            real=False
        )
        logger.info(f"Family III at α = -β = {al} has no finite value")
    else:
        family_id = FamilyId.III_LOG
        target = TargetDescriptor(
            kind=TargetKind.LOG_FORM,
            formula="β + 2√(αγ)/ln((√α+√γ)/(√α-√γ)), γ = -β",
            params=p,
            real=al > -be
        )
    return _build(family_id, p, _arctan_scheme(al, be), target, head=(al + be, al * be))


def family_III_mn(m: Rational, n: Rational) -> FamilySpec:
    """Family III at α = m + n, β = n - m"""
    p = _params(m=m, n=n)
    _require(p["n"] > abs(p["m"]), "Family III (m, n) needs n > |m|")
    al, be = p["m"] + p["n"], p["n"] - p["m"]
    target = TargetDescriptor(
        kind=TargetKind.ATAN_FORM,
        formula="(n-m) + √(n²-m²)/atan√((n-m)/(n+m))",
        params=p
    )
    return _build(FamilyId.III_MN, p, _arctan_scheme(al, be), target, head=(al + be, al * be))


def family_IV(alpha: Rational) -> FamilySpec:
    """
    Rows f_k = k, g_k = k + 1 - α, h_k = α with head (1-α, α)

    (1-α) + α/((2-α) + 2α/((3-α) + 3α/(...))) = α/(e^α - 1)
    """
    p = _params(alpha=alpha)
    al = p["alpha"]
    _require(al != 0, "Family IV needs α ≠ 0 (the α → 0 limit is 1)")

    scheme = RecurrenceScheme(
        lambda k: (k, k + 1 - al, al),
        seed_descriptor="A = ∫e^(αx)dx, B = ∫x e^(αx)dx over [0, 1]",
        label="family_IV"
    )
    target = TargetDescriptor(kind=TargetKind.EXP_FORM, formula="α/(e^α - 1)", params=p)
    return _build(FamilyId.IV, p, scheme, target, head=(1 - al, al))


def family_V(
    a: Rational,
    b: Rational,
    c: Rational,
    theta: Rational,
    lam: Rational,
    alpha: Rational
) -> FamilySpec:
    """
    Rows with n_k = α + (k-1)θ: f_k = n_k a, g_k = (n_k + λθ) b, h_k = (n_k + 2λθ) c

    The value is α·a·A/B with A = ∫x^(α-1) w^(λ-1), B = ∫x^(α+θ-1) w^(λ-1),
    w = a - b x^θ - c x^(2θ), over (0, U) where U^θ is the first positive
    root of w.
    """
    p = _params(a=a, b=b, c=c, theta=theta, lam=lam, alpha=alpha)
    a_, b_, c_ = p["a"], p["b"], p["c"]
    th, la, al = p["theta"], p["lam"], p["alpha"]
    _require(a_ > 0, "Family V needs a > 0")
    _require(c_ != 0, "Family V needs c ≠ 0")
    _require(th > 0 and la > 0 and al > 0, "Family V needs θ, λ, α > 0")
    _require(b_ * b_ + 4 * a_ * c_ > 0, "Family V needs b² + 4ac > 0")
    _require(c_ > 0 or b_ > 0, "Family V weight a - by - cy² has no positive root")

    def rows(k: int):
        n_k = al + (k - 1) * th
        return n_k * a_, (n_k + la * th) * b_, (n_k + 2 * la * th) * c_

    scheme = RecurrenceScheme(
        rows,
        seed_descriptor="A, B: weighted integrals of x^(α-1), x^(α+θ-1) up to the root",
        label="family_V"
    )
    target = TargetDescriptor(
        kind=TargetKind.QUADRATURE_RATIO,
        formula="α·a·A/B",
        params=p,
        upper_limit_rule="root"
    )
    return _build(FamilyId.V, p, scheme, target)


def family_VI(a: Rational, b: Rational, theta: Rational, lam: Rational, alpha: Rational) -> FamilySpec:
    """
    Rows with n_k = α + (k-1)θ: f_k = n_k a, g_k = (n_k + λθ)a - n_k b, h_k = (n_k + λθ) b

    The value is α·a·A/B with A = ∫₀¹ x^(α-1)(1-x^θ)^(λ-1)/(a + b x^θ) dx and
    B its θ-shifted analog. With b = 0 the recurrence has two terms and the
    fraction is the single number g_1.
    """
    p = _params(a=a, b=b, theta=theta, lam=lam, alpha=alpha)
    a_, b_ = p["a"], p["b"]
    th, la, al = p["theta"], p["lam"], p["alpha"]
    _require(a_ > 0, "Family VI needs a > 0")
    _require(a_ + b_ > 0, "Family VI needs a + b x^θ > 0 on [0, 1]")
    _require(th > 0 and la > 0 and al > 0, "Family VI needs θ, λ, α > 0")

    def rows(k: int):
        n_k = al + (k - 1) * th
        return n_k * a_, (n_k + la * th) * a_ - n_k * b_, (n_k + la * th) * b_

    scheme = RecurrenceScheme(
        rows,
        seed_descriptor="A, B: ∫₀¹ x^(α-1)(1-x^θ)^(λ-1)/(a+bx^θ) and its θ-shift",
        label="family_VI"
    )
    target = TargetDescriptor(
        kind=TargetKind.QUADRATURE_RATIO,
        formula="α·a·A/B",
        params=p,
        upper_limit_rule="one"
    )
    return _build(FamilyId.VI, p, scheme, target, depth=0 if b_ == 0 else None)


def family_VII(alpha: Rational, lam: Rational, delta: Rational) -> FamilySpec:
    """
    Rows f_k = δ + k - 1, g_k = δ + k - 1 + λ - α, h_k = α

    The value is δA/B with A = ∫₀¹ x^(δ-1) e^(αx) (1-x)^(λ-1) dx and B the
    same with x^δ.
    """
    p = _params(alpha=alpha, lam=lam, delta=delta)
    al, la, de = p["alpha"], p["lam"], p["delta"]
    _require(la > 0, "Family VII needs λ > 0")
    _require(de > 0, "Family VII needs δ > 0")
    _require(al != 0, "Family VII needs α ≠ 0")

    scheme = RecurrenceScheme(
        lambda k: (de + k - 1, de + k - 1 + la - al, al),
        seed_descriptor="A, B: ∫₀¹ x^(δ-1) e^(αx) (1-x)^(λ-1) and its x-shift",
        label="family_VII"
    )
    target = TargetDescriptor(
        kind=TargetKind.QUADRATURE_RATIO,
        formula="δ·A/B",
        params=p,
        upper_limit_rule="one"
    )
    return _build(FamilyId.VII, p, scheme, target)


FAMILY_CONSTRUCTORS = {
    FamilyId.I: family_I,
    FamilyId.I_SIMPLE: family_I_simple,
    FamilyId.II: family_II,
    FamilyId.II_MN: family_II_mn,
    FamilyId.III: family_III,
    FamilyId.III_LOG: family_III,
    FamilyId.III_MN: family_III_mn,
    FamilyId.IV: family_IV,
    FamilyId.V: family_V,
    FamilyId.VI: family_VI,
    FamilyId.VII: family_VII,
}


def build_family(family_id: FamilyId, params: Dict[str, Rational]) -> FamilySpec:
    """
    Call a family constructor with keyword parameters (Greek or ASCII names)

    Raises:
        FamilyDomainError: for unknown or missing parameters and domain violations
    """
    constructor = FAMILY_CONSTRUCTORS[FamilyId(family_id)]
    kwargs = {}
    for name, value in params.items():
        canonical = PARAM_ALIASES.get(name.strip())
        if canonical is None:
            raise FamilyDomainError(f"Unknown parameter {name!r}")
        kwargs[canonical] = as_fraction(value)
    try:
        return constructor(**kwargs)
    except TypeError as e:
        raise FamilyDomainError(f"Bad parameters for family {FamilyId(family_id).value}: {e}") from e
