"""Continued fractions from three-term recurrences f_k T_k = g_k T_{k+1} + h_k T_{k+2}

Dividing each relation by its successor term gives
``f_1 A/B = g_1 + f_2 h_1/(g_2 + f_3 h_2/(g_3 + ...))``, so a row generator
k -> (f_k, g_k, h_k) determines the fraction completely; the seeds A, B only
fix its value.
"""
import json
import logging
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, List, NamedTuple, Optional, Sequence, Union

import jsonschema
from pydantic import BaseModel, Field, field_validator

from core.continued_fraction import GeneralizedCF, Rational, as_fraction, fraction_to_mpf

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = r"^-?\d+(/\d+)?$"

SCHEME_FILE_SCHEMA = {
    "type": "object",
    "required": ["f", "g", "h"],
    "properties": {
        "f": {"$ref": "#/definitions/affine"},
        "g": {"$ref": "#/definitions/affine"},
        "h": {"$ref": "#/definitions/affine"},
        "seed_note": {"type": "string"},
        "label": {"type": "string"},
    },
    "additionalProperties": False,
    "definitions": {
        "affine": {
            "type": "object",
            "required": ["p", "q"],
            "properties": {
                "p": {"type": "string", "pattern": RATIONAL_PATTERN},
                "q": {"type": "string", "pattern": RATIONAL_PATTERN},
            },
            "additionalProperties": False,
        }
    },
}


class RecurrenceError(ValueError):
    """Raised for unusable recurrence rows or scheme files"""


class CoefficientTriple(NamedTuple):
    """Row k of the recurrence f_k T_k = g_k T_{k+1} + h_k T_{k+2}"""
    k: int
    f: Fraction
    g: Fraction
    h: Fraction


TripleFn = Callable[[int], tuple]


class RecurrenceScheme:
    """
    Indexed generator of coefficient rows plus a note on the seeds A, B.

    Args:
        rows: Pure function k -> (f_k, g_k, h_k) for k >= 1
        seed_descriptor: Description (or oracle reference) of the seeds A and B
        label: Name used for the fractions built from this scheme
    """

    __slots__ = ("seed_descriptor", "label", "_rows")

    def __init__(self, rows: TripleFn, seed_descriptor: str = "A, B", label: str = "scheme"):
        self.seed_descriptor = seed_descriptor
        self.label = label
        self._rows = lru_cache(maxsize=None)(rows)

    def triple(self, k: int) -> CoefficientTriple:
        """Row k as exact rationals; rejects f_k = 0"""
        if k < 1:
            raise RecurrenceError(f"Rows are indexed from 1, got {k}")
        f, g, h = (as_fraction(x) for x in self._rows(k))
        if f == 0:
            raise RecurrenceError(f"{self.label}: f_{k} = 0, row {k} cannot be solved for its leading term")
        return CoefficientTriple(k, f, g, h)

    def shift(self) -> 'RecurrenceScheme':
        """Scheme for the sequence B, C, D, ... (first row dropped)"""
        rows = self._rows
        return RecurrenceScheme(
            lambda k: rows(k + 1),
            seed_descriptor=f"shift of ({self.seed_descriptor})",
            label=f"{self.label}>>1"
        )

    @classmethod
    def affine(
        cls,
        f: 'AffineTemplate',
        g: 'AffineTemplate',
        h: 'AffineTemplate',
        seed_descriptor: str = "A, B",
        label: str = "affine"
    ) -> 'RecurrenceScheme':
        """Scheme whose rows are p + q*k in each coefficient"""
        return cls(lambda k: (f.at(k), g.at(k), h.at(k)), seed_descriptor, label)


def cf_from_recurrence(scheme: RecurrenceScheme, depth: Optional[int] = None) -> GeneralizedCF:
    """
    Build the continued fraction whose value is f_1 A/B.

    b0 = g_1, and for k >= 1: a_k = f_{k+1} h_k, b_k = g_{k+1}.

    Args:
        scheme: Recurrence rows
        depth: Keep only this many elements (finite fraction); None for infinite

    Returns:
        The (lazy) fraction

    Raises:
        RecurrenceError: if f_1 = 0 or the first partial numerator vanishes
    """
    first = scheme.triple(1)
    if depth != 0:
        second = scheme.triple(2)
        if second.f * first.h == 0:
            raise RecurrenceError(
                f"{scheme.label}: h_1 = 0 makes a_1 = 0; the reduction has no continued fraction"
            )

    def element(k: int):
        row = scheme.triple(k)
        following = scheme.triple(k + 1)
        return following.f * row.h, following.g

    logger.debug(f"Built fraction from scheme {scheme.label} (depth={depth})")
    return GeneralizedCF(first.g, element if depth != 0 else None, depth, scheme.label)


def recurrence_residual(
    scheme: RecurrenceScheme,
    terms: Sequence[Union[Rational, object]],
    k_max: int
) -> List[object]:
    """
    Residuals r_k = f_k T_k - g_k T_{k+1} - h_k T_{k+2} for k = 1..k_max

    Terms are 1-indexed (terms[0] is T_1). Exact Fractions give exact residuals;
    any mpmath term switches the whole computation to the current mpmath precision.

    Raises:
        RecurrenceError: if fewer than k_max + 2 terms are supplied
    """
    if len(terms) < k_max + 2:
        raise RecurrenceError(f"Need at least {k_max + 2} terms for k_max={k_max}, got {len(terms)}")

    exact = all(isinstance(t, (int, Fraction)) for t in terms[:k_max + 2])
    convert = as_fraction if exact else fraction_to_mpf

    residuals = []
    for k in range(1, k_max + 1):
        row = scheme.triple(k)
        t0, t1, t2 = terms[k - 1], terms[k], terms[k + 1]
        if exact:
            t0, t1, t2 = (as_fraction(t) for t in (t0, t1, t2))
        residuals.append(convert(row.f) * t0 - convert(row.g) * t1 - convert(row.h) * t2)
    return residuals


def parse_rational(text: str) -> Fraction:
    """Parse 'num/den' or 'int' into a Fraction"""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise RecurrenceError(f"Invalid rational string {text!r}: {e}") from e
    if "." in text or "e" in text.lower():
        raise RecurrenceError(f"Rational strings must be 'num/den' or 'int', got {text!r}")
    return value


class AffineTemplate(BaseModel):
    """Coefficient p + q*k"""
    p: str = Field(..., description="Constant term as 'num/den' or 'int'")
    q: str = Field(..., description="Coefficient of k as 'num/den' or 'int'")

    @field_validator('p', 'q')
    @classmethod
    def validate_rational(cls, v):
        parse_rational(v)
        return v

    def at(self, k: int) -> Fraction:
        return parse_rational(self.p) + parse_rational(self.q) * k


class SchemeFile(BaseModel):
    """JSON scheme file: affine templates for f, g, h"""
    f: AffineTemplate
    g: AffineTemplate
    h: AffineTemplate
    seed_note: Optional[str] = None
    label: Optional[str] = None

    def to_scheme(self, default_label: str = "scheme") -> RecurrenceScheme:
        return RecurrenceScheme.affine(
            self.f, self.g, self.h,
            seed_descriptor=self.seed_note or "A, B (unspecified)",
            label=self.label or default_label
        )


def load_scheme_file(path: Union[str, Path]) -> RecurrenceScheme:
    """
    Read and validate a scheme file

    Raises:
        RecurrenceError: if the file cannot be read, is not JSON, or fails validation
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise RecurrenceError(f"Cannot read scheme file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise RecurrenceError(f"Scheme file {path} is not valid JSON: {e}") from e

    try:
        jsonschema.validate(instance=data, schema=SCHEME_FILE_SCHEMA)
    except jsonschema.ValidationError as e:
        raise RecurrenceError(f"Scheme file {path} is malformed: {e.message}") from e

    scheme_file = SchemeFile(**data)
    logger.info(f"Loaded scheme file {path}")
    return scheme_file.to_scheme(default_label=path.stem)
