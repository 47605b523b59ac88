"""Recipe steps: named transform sequences with a shared directive text form

A recipe takes a family's fraction to a displayed form. Each step returns the
rewritten fraction and the Mobius map that carries the old value to the new
one, so targets can be pushed through a whole recipe.
"""
import ast
import logging
import operator
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from core.continued_fraction import GeneralizedCF, as_fraction, convergents
from core.recurrence import RecurrenceError, parse_rational
from core.transforms import (
    Mobius,
    adjoin_head,
    alternate_signs,
    clear_denominators,
    drop_head,
    equivalence_scale,
)

logger = logging.getLogger(__name__)

_BINARY_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY_OPS = {
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}
MAX_EXPONENT = 64


class DirectiveError(ValueError):
    """Raised for transform directives that cannot be parsed"""


def _evaluate_node(node: ast.AST, k: int) -> Fraction:
    if isinstance(node, ast.Expression):
        return _evaluate_node(node.body, k)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.Name) and node.id == "k":
        return Fraction(k)
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY_OPS:
        return _UNARY_OPS[type(node.op)](_evaluate_node(node.operand, k))
    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY_OPS:
        left = _evaluate_node(node.left, k)
        right = _evaluate_node(node.right, k)
        if isinstance(node.op, ast.Pow):
            if right.denominator != 1:
                raise DirectiveError("Exponents in scale expressions must be integers")
            if abs(right) > MAX_EXPONENT:
                raise DirectiveError(f"Exponent {right} at k={k} exceeds {MAX_EXPONENT} in magnitude")
        return _BINARY_OPS[type(node.op)](left, right)
    raise DirectiveError(f"Unsupported element in scale expression: {ast.dump(node)}")


def compile_scale_expression(text: str) -> Callable[[int], Fraction]:
    """
    Compile a rational expression in k (e.g. '1/(k+1)', '(-1)**k')

    Raises:
        DirectiveError: for syntax errors, names other than k, or a zero
            division at k = 1
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise DirectiveError(f"Invalid scale expression {text!r}: {e.msg}") from e

    def scale(k: int) -> Fraction:
        try:
            return _evaluate_node(tree, k)
        except ZeroDivisionError as e:
            raise DirectiveError(f"Scale expression {text!r} divides by zero at k={k}") from e

    scale(1)
    return scale


class RecipeStep(BaseModel):
    """One rewrite of a fraction, with its effect on the value"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def directive(self) -> str:
        raise NotImplementedError

    @property
    def level_shift(self) -> int:
        """How far the step moves convergent levels (+1 adjoin, -1 drop)"""
        return 0

    def apply(self, cf: GeneralizedCF) -> Tuple[GeneralizedCF, Mobius]:
        raise NotImplementedError


class Adjoin(RecipeStep):
    """v -> b0 + a1/v"""
    b0: Fraction
    a1: Fraction

    @field_validator('b0', 'a1', mode='before')
    @classmethod
    def coerce_rational(cls, v):
        return as_fraction(v)

    @property
    def directive(self) -> str:
        return f"adjoin:{self.b0},{self.a1}"

    @property
    def level_shift(self) -> int:
        return 1

    def apply(self, cf):
        return adjoin_head(cf, self.b0, self.a1), Mobius.head(self.b0, self.a1)


class Drop(RecipeStep):
    """Replace a fraction by its tail"""

    @property
    def directive(self) -> str:
        return "drop"

    @property
    def level_shift(self) -> int:
        return -1

    def apply(self, cf):
        b0, a1, tail = drop_head(cf)
        return tail, Mobius.tail(b0, a1)


class Scale(RecipeStep):
    """Equivalence scaling with c_k given by an expression in k"""
    expr: str = Field(..., description="Rational expression in k")

    @field_validator('expr')
    @classmethod
    def validate_expr(cls, v):
        compile_scale_expression(v)
        return v

    @property
    def directive(self) -> str:
        return f"scale:k->{self.expr}"

    def apply(self, cf):
        return equivalence_scale(cf, compile_scale_expression(self.expr)), Mobius.identity()


class AltSign(RecipeStep):
    """Equivalence scaling with c_k = (-1)^k"""

    @property
    def directive(self) -> str:
        return "altsign"

    def apply(self, cf):
        return alternate_signs(cf), Mobius.identity()


class ClearDenominators(RecipeStep):
    """Least-rational integer normalization"""
    depth: Optional[int] = Field(None, description="Last normalized level (all when None)")

    @property
    def directive(self) -> str:
        return "cleardenom" if self.depth is None else f"cleardenom:{self.depth}"

    def apply(self, cf):
        return clear_denominators(cf, self.depth), Mobius.identity()


def _rewrite_head(cf: GeneralizedCF, b0: Fraction, a1: Fraction) -> GeneralizedCF:
    _, _, tail = drop_head(cf)
    return adjoin_head(tail, b0, a1)


class RescaleValue(RecipeStep):
    """v -> d*v, by multiplying b0 and a1 by d"""
    factor: Fraction

    @field_validator('factor', mode='before')
    @classmethod
    def validate_factor(cls, v):
        v = as_fraction(v)
        if v == 0:
            raise ValueError("Rescale factor must be nonzero")
        return v

    @property
    def directive(self) -> str:
        return f"rescale:{self.factor}"

    def apply(self, cf):
        value_map = Mobius(self.factor, Fraction(0), Fraction(0), Fraction(1))
        if not cf.has_level(1):
            return GeneralizedCF(self.factor * cf.b0, label=cf.label), value_map
        a1, _ = cf.element(1)
        return _rewrite_head(cf, self.factor * cf.b0, self.factor * a1), value_map


class ShiftValue(RecipeStep):
    """v -> v + t, by adding t to b0"""
    offset: Fraction

    @field_validator('offset', mode='before')
    @classmethod
    def coerce_rational(cls, v):
        return as_fraction(v)

    @property
    def directive(self) -> str:
        return f"shift:{self.offset}"

    def apply(self, cf):
        value_map = Mobius(Fraction(1), self.offset, Fraction(0), Fraction(1))
        if not cf.has_level(1):
            return GeneralizedCF(cf.b0 + self.offset, label=cf.label), value_map
        a1, _ = cf.element(1)
        return _rewrite_head(cf, cf.b0 + self.offset, a1), value_map


Recipe = Sequence[RecipeStep]


def apply_recipe(cf: GeneralizedCF, recipe: Recipe) -> Tuple[GeneralizedCF, Mobius]:
    """Run each step in order; returns the final fraction and the composed value map"""
    value_map = Mobius.identity()
    for step in recipe:
        cf, step_map = step.apply(cf)
        value_map = value_map.then(step_map)
        logger.debug(f"Applied {step.directive} -> {cf.label}")
    return cf, value_map


class InvarianceCheck(NamedTuple):
    checked: int
    mismatched: List[int]

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.mismatched


def check_value_invariance(
    original: GeneralizedCF,
    transformed: GeneralizedCF,
    value_map: Mobius,
    shift: int,
    depth: int
) -> InvarianceCheck:
    """
    Compare transformed convergents with mapped original convergents

    Level k of the transformed fraction corresponds to level k - shift of the
    original. Points are compared projectively, so levels with q = 0 count too.
    """
    source = convergents(original, max(depth - shift, 0))
    checked, mismatched = 0, []
    for convergent in convergents(transformed, depth):
        j = convergent.level - shift
        if j < 0 or j >= len(source):
            continue
        u, v = value_map.apply_pair(source[j].p, source[j].q)
        checked += 1
        if convergent.p * v != convergent.q * u:
            mismatched.append(convergent.level)
    return InvarianceCheck(checked, mismatched)


def _rational_argument(text: str, directive: str) -> Fraction:
    try:
        return parse_rational(text)
    except RecurrenceError as e:
        raise DirectiveError(f"Bad rational in directive {directive!r}: {e}") from e


def parse_directive(text: str) -> RecipeStep:
    """
    Parse one directive: scale:k->expr, adjoin:b0,a1, drop, altsign,
    cleardenom[:depth], rescale:d, shift:t

    Raises:
        DirectiveError: for unknown or malformed directives
    """
    text = text.strip()
    name, _, argument = text.partition(":")
    name = name.lower()

    if name in ("drop", "altsign") and argument:
        raise DirectiveError(f"Directive {name!r} takes no argument")
    if name == "drop":
        return Drop()
    if name == "altsign":
        return AltSign()
    if name == "cleardenom":
        if not argument:
            return ClearDenominators()
        if not argument.isdigit() or int(argument) < 1:
            raise DirectiveError(f"cleardenom depth must be a positive integer, got {argument!r}")
        return ClearDenominators(depth=int(argument))
    if name == "scale":
        if not argument.startswith("k->"):
            raise DirectiveError(f"Scale directives look like 'scale:k->expr', got {text!r}")
        expr = argument[len("k->"):]
        try:
            return Scale(expr=expr)
        except ValueError as e:
            raise DirectiveError(str(e)) from e
    if name == "adjoin":
        parts = argument.split(",")
        if len(parts) != 2:
            raise DirectiveError(f"Adjoin directives look like 'adjoin:b0,a1', got {text!r}")
        b0, a1 = (_rational_argument(p, text) for p in parts)
        if a1 == 0:
            raise DirectiveError("Adjoined partial numerator must be nonzero")
        return Adjoin(b0=b0, a1=a1)
    if name == "rescale":
        factor = _rational_argument(argument, text)
        if factor == 0:
            raise DirectiveError("Rescale factor must be nonzero")
        return RescaleValue(factor=factor)
    if name == "shift":
        return ShiftValue(offset=_rational_argument(argument, text))

    raise DirectiveError(f"Unknown directive {text!r}")


def parse_directives(texts: Union[str, Sequence[str]]) -> List[RecipeStep]:
    """Parse a directive list; a single string is split on ';'"""
    if isinstance(texts, str):
        texts = [t for t in texts.split(";") if t.strip()]
    return [parse_directive(t) for t in texts]
