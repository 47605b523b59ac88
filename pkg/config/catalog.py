"""Registry of named identities with their verification schedule"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

from core.continued_fraction import GeneralizedCF
from core.families import (
    FamilySpec,
    family_I,
    family_I_simple,
    family_II,
    family_II_mn,
    family_III,
    family_III_mn,
    family_IV,
    family_V,
    family_VI,
    family_VII,
)
from core.models import FamilyId, Termination
from core.recipes import (
    AltSign,
    Adjoin,
    ClearDenominators,
    Drop,
    RecipeStep,
    RescaleValue,
    Scale,
    ShiftValue,
    apply_recipe,
)
from core.transforms import Mobius


class UnknownEntryError(ValueError):
    """Raised for catalog names that do not exist"""


@dataclass(frozen=True)
class CatalogEntry:
    """A displayed identity: family member, recipe to its displayed form, schedule"""
    name: str
    family: Callable[[], FamilySpec]
    description: str
    recipe: Tuple[RecipeStep, ...] = ()
    depth: int = 200
    tolerance: float = 1e-30
    expected: Termination = Termination.TOLERANCE_MET
    notes: str = field(default="", compare=False)

    @property
    def spec(self) -> FamilySpec:
        return self.family()

    @property
    def family_id(self) -> FamilyId:
        return self.spec.family_id

    def build(self) -> Tuple[GeneralizedCF, Mobius]:
        """Displayed fraction and the map from the family value to its value"""
        cf, value_map = apply_recipe(self.spec.cf, self.recipe)
        return cf.relabel(self.name), value_map

    @property
    def cf(self) -> GeneralizedCF:
        return self.build()[0]

    @property
    def directives(self) -> List[str]:
        return [step.directive for step in self.recipe]


HALF = Fraction(1, 2)

# e - 1 = 1 + (1/1)/(1 + (1/2)/(1 + (1/3)/(1 + ...)))
E_MINUS_1_UNIT_RECIPE = (Scale(expr="1/k"), Drop())
E_MINUS_1_RECIPE = E_MINUS_1_UNIT_RECIPE + (ClearDenominators(),)

_ENTRIES: Tuple[CatalogEntry, ...] = (
    # Quadratic surds
    CatalogEntry(
        name="sqrt_quadratic_surd",
        family=lambda: family_I(1, 1, 1),
        description="2 + 6/(3 + 12/(4 + 20/(5 + ...))) = 1 + √5",
    ),
    CatalogEntry(
        name="sqrt_exact_six",
        family=lambda: family_I(3, 2, 1),
        description="α=3, β=2, γ=1: β + √(β² + 4αγ) = 6",
    ),
    CatalogEntry(
        name="sqrt_head_form",
        family=lambda: family_I(1, 1, 1),
        recipe=(Adjoin(b0=1, a1=2),),
        description="head (β, δ) with δ = 2αγ: ½β + ½√(β² + 2δ) = (1 + √5)/2",
    ),
    CatalogEntry(
        name="sqrt_depressed_form",
        family=lambda: family_I(1, 1, 1),
        recipe=(Scale(expr="1/(k+2)"), RescaleValue(factor=HALF)),
        description="depression to the all-β form β + ε/(β + ε/(β + ...))",
    ),
    CatalogEntry(
        name="golden_ratio",
        family=lambda: family_I_simple(1, 1),
        description="1 + 1/(1 + 1/(1 + ...)) = (1 + √5)/2",
    ),
    CatalogEntry(
        name="silver_ratio_power_series",
        family=lambda: family_I_simple(2, 1),
        description="constant rows of a geometric sequence: 2 + 1/(2 + 1/(2 + ...)) = 1 + √2",
    ),

    # Logarithms
    CatalogEntry(
        name="log2_reciprocal",
        family=lambda: family_II(1, 1),
        depth=2000,
        tolerance=1e-3,
        description="1 + 1/(1 + 4/(1 + 9/(1 + 16/(1 + ...)))) = 1/ln 2",
    ),
    CatalogEntry(
        name="log3_zero_denominator",
        family=lambda: family_II(1, 2),
        depth=500,
        tolerance=1e-20,
        description="1 + 2/(0 + 8/(-1 + 18/(-2 + ...))) = 2/ln 3",
        notes="q = 0 at level 1; the table shows undef there",
    ),
    CatalogEntry(
        name="log_3_over_2_reciprocal",
        family=lambda: family_II(2, 1),
        depth=500,
        tolerance=1e-20,
        description="α=2, β=1: 1/ln(3/2)",
    ),
    CatalogEntry(
        name="log_5_over_2",
        family=lambda: family_II_mn(1, 4),
        depth=500,
        tolerance=1e-12,
        description="3 + 6/(4 + 24/(5 + 54/(6 + ...))) = 2/ln(5/2)",
    ),
    CatalogEntry(
        name="log_3_over_2",
        family=lambda: family_II_mn(1, 5),
        depth=500,
        tolerance=1e-12,
        description="4 + 8/(6 + 32/(8 + 72/(10 + ...))) = 2/ln(3/2)",
    ),
    CatalogEntry(
        name="log_3_over_2_halved",
        family=lambda: family_II_mn(1, 5),
        recipe=(Scale(expr="1/2"), RescaleValue(factor=HALF)),
        depth=500,
        tolerance=1e-6,
        description="halved and reduced: 2 + 2/(3 + 8/(4 + 18/(5 + ...))) = 1/ln(3/2)",
    ),
    CatalogEntry(
        name="log2_mn_halved",
        family=lambda: family_II_mn(1, 3),
        recipe=(Scale(expr="1/2"), RescaleValue(factor=HALF)),
        depth=2000,
        tolerance=1e-3,
        description="2 + 4/(2 + 16/(2 + ...)) halved and reduced to 1 + 1/(1 + 4/(1 + ...)) = 1/ln 2",
    ),

    # Arc tangents and their logarithmic branch
    CatalogEntry(
        name="brouncker_one_plus_4_over_pi",
        family=lambda: family_III(1, 1),
        depth=1000,
        tolerance=2e-3,
        description="2 + 1/(2 + 9/(2 + 25/(2 + ...))) = 1 + 4/π",
    ),
    CatalogEntry(
        name="brouncker_4_over_pi",
        family=lambda: family_III(1, 1),
        recipe=(ShiftValue(offset=-1),),
        depth=1000,
        tolerance=2e-3,
        description="Brouncker: 1 + 1/(2 + 9/(2 + 25/(2 + 49/(2 + ...)))) = 4/π",
    ),
    CatalogEntry(
        name="atan_sqrt3",
        family=lambda: family_III(3, 1),
        depth=2000,
        tolerance=1e-8,
        description="4 + 3/(8 + 27/(12 + 75/(16 + ...))) = 1 + 6√3/π",
    ),
    CatalogEntry(
        name="atan_mn_form",
        family=lambda: family_III_mn(1, 3),
        depth=500,
        tolerance=1e-8,
        description="α + β = 2n, α - β = 2m at m=1, n=3: 2 + √8/atan√(1/2)",
    ),
    CatalogEntry(
        name="log_negative_beta",
        family=lambda: family_III(2, -1),
        depth=500,
        tolerance=1e-8,
        description="β = -γ: -1 + 2√2/ln((√2+1)/(√2-1))",
    ),
    CatalogEntry(
        name="log3_negative_beta",
        family=lambda: family_III(4, -1),
        depth=2000,
        tolerance=1e-6,
        description="3 - 4/(13 - 36/(23 - 100/(33 - ...))) = -1 + 4/ln 3",
    ),
    CatalogEntry(
        name="log2_negative_beta",
        family=lambda: family_III(9, -1),
        depth=2000,
        tolerance=1e-6,
        description="8 - 9/(28 - 81/(48 - 225/(68 - ...))) = -1 + 6/ln 2",
    ),
    CatalogEntry(
        name="log_divergent_alpha_eq_gamma",
        family=lambda: family_III(1, -1),
        depth=256,
        tolerance=1e-8,
        expected=Termination.DIVERGENCE_DETECTED,
        description="α = γ: the fraction creeps without a finite value",
        notes="differences decay too slowly; verification passes when divergence is flagged",
    ),

    # Exponentials
    CatalogEntry(
        name="reciprocal_e_minus_1",
        family=lambda: family_IV(1),
        description="0 + 1/(1 + 2/(2 + 3/(3 + ...))) = 1/(e - 1)",
    ),
    CatalogEntry(
        name="e_minus_1_unit_form",
        family=lambda: family_IV(1),
        recipe=E_MINUS_1_UNIT_RECIPE,
        description="1 + (1/1)/(1 + (1/2)/(1 + (1/3)/(1 + ...))) = e - 1",
    ),
    CatalogEntry(
        name="e_minus_1",
        family=lambda: family_IV(1),
        recipe=E_MINUS_1_RECIPE,
        description="1 + 1/(1 + 1/(2 + 2/(3 + 3/(4 + ...)))) = e - 1",
    ),
    CatalogEntry(
        name="euler_e",
        family=lambda: family_IV(1),
        recipe=E_MINUS_1_RECIPE + (ShiftValue(offset=1),),
        description="2 + 1/(1 + 1/(2 + 2/(3 + 3/(4 + ...)))) = e",
    ),
    CatalogEntry(
        name="reciprocal_e_minus_2",
        family=lambda: family_IV(1),
        recipe=E_MINUS_1_RECIPE + (Drop(),),
        description="1 + 1/(2 + 2/(3 + 3/(4 + ...))) = 1/(e - 2)",
    ),
    CatalogEntry(
        name="exp_two_zero_denominator",
        family=lambda: family_IV(2),
        description="-1 + 2/(0 + 4/(1 + 6/(2 + 8/(3 + ...)))) = 2/(e² - 1)",
        notes="q = 0 at level 1",
    ),
    CatalogEntry(
        name="exp_two_tanh_form",
        family=lambda: family_IV(2),
        recipe=(Drop(),),
        description="0 + 4/(1 + 6/(2 + 8/(3 + ...))) = 2(e² - 1)/(e² + 1)",
    ),
    CatalogEntry(
        name="e_over_e_minus_1",
        family=lambda: family_IV(-1),
        description="2 - 1/(3 - 2/(4 - 3/(5 - ...))) = e/(e - 1)",
    ),
    CatalogEntry(
        name="e_over_e_minus_1_alternating",
        family=lambda: family_IV(-1),
        recipe=(AltSign(),),
        description="2 + 1/(-3 + 2/(4 + 3/(-5 + ...))) = e/(e - 1)",
    ),
    CatalogEntry(
        name="sqrt_e_reciprocal",
        family=lambda: family_IV(HALF),
        recipe=(ClearDenominators(), RescaleValue(factor=2)),
        description="1 + 2/(3 + 4/(5 + 6/(7 + 8/(9 + ...)))) = 1/(√e - 1)",
    ),
    CatalogEntry(
        name="cbrt_e_reciprocal",
        family=lambda: family_IV(Fraction(1, 3)),
        recipe=(Scale(expr="3"), RescaleValue(factor=3)),
        description="2 + 3/(5 + 6/(8 + 9/(11 + ...))) = 1/(∛e - 1)",
        notes="constant scale 3; cleardenom would reduce level 2 to content 1",
    ),
    CatalogEntry(
        name="cbrt_e_squared",
        family=lambda: family_IV(Fraction(2, 3)),
        recipe=(Scale(expr="3"), RescaleValue(factor=3)),
        description="1 + 6/(4 + 12/(7 + 18/(10 + ...))) = 2/(∛(e²) - 1)",
    ),

    # Quadrature-backed families
    CatalogEntry(
        name="general_quadratic_v",
        family=lambda: family_V(2, 1, 1, 1, 2, 1),
        depth=2000,
        tolerance=1e-8,
        description="a=2, b=1, c=1, θ=1, λ=2, α=1: α·a·A/B over (0, 1)",
    ),
    CatalogEntry(
        name="beta_weight_vi",
        family=lambda: family_VI(1, 0, 1, 2, 1),
        depth=2000,
        tolerance=1e-8,
        description="a=1, b=0, θ=1, λ=2, α=1: two-term reduction, value 3",
    ),
    CatalogEntry(
        name="rational_weight_vi",
        family=lambda: family_VI(2, 1, 1, 2, 1),
        depth=2000,
        tolerance=1e-8,
        description="a=2, b=1, θ=1, λ=2, α=1: weight (1-x)/(2+x)",
    ),
    CatalogEntry(
        name="exp_weight_vii",
        family=lambda: family_VII(-1, 3, 2),
        depth=2000,
        tolerance=1e-8,
        description="δ=2, λ=3, α=-1: δA/B with weight x e^(-x) (1-x)²",
    ),
    CatalogEntry(
        name="abstruse_half_half",
        family=lambda: family_VII(1, HALF, HALF),
        depth=2000,
        tolerance=1e-8,
        description="δ=λ=1/2, α=1: endpoint-singular weights",
        notes="seeds by tanh-sinh on two halves, each desingularized at its endpoint",
    ),
)


@lru_cache(maxsize=1)
def _registry() -> Dict[str, CatalogEntry]:
    return {entry.name: entry for entry in _ENTRIES}


def catalog() -> Tuple[CatalogEntry, ...]:
    """All entries in stable order"""
    return _ENTRIES


def get_entry(name: str) -> CatalogEntry:
    """Look up an entry by name"""
    try:
        return _registry()[name]
    except KeyError:
        raise UnknownEntryError(f"Unknown catalog entry {name!r}") from None


def get_entries_by_family(family_id: FamilyId) -> List[CatalogEntry]:
    """Entries built on one family, in catalog order"""
    family_id = FamilyId(family_id)
    return [entry for entry in _ENTRIES if entry.family_id == family_id]


def validate_entry_name(name: str) -> bool:
    """Check if a catalog name is known"""
    return name in _registry()
