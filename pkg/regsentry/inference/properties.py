"""Properties, their formulas and their lifecycle."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Callable, Optional

from ..minic.analyzer import ProgramPoint
from ..minic.nodes import Binary, FieldAccess, Index, IntLit, Unary, Var
from ..minic.printer import print_expression
from ..shared.errors import LifecycleError, PointMismatch
from ..tracer.interpreter import TraceSample, wrap


class PropertyStatus(Enum):
    DYNAMIC = "DYNAMIC"
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"
    OUTDATED = "OUTDATED"
    NON_REGRESSION = "NON_REGRESSION"
    VIOLATED = "VIOLATED"
    PRESERVED = "PRESERVED"
    UNCHECKED = "UNCHECKED"
    UNMAPPABLE = "UNMAPPABLE"


_TRANSITIONS = {
    PropertyStatus.DYNAMIC: {PropertyStatus.TRUE, PropertyStatus.FALSE, PropertyStatus.UNKNOWN},
    PropertyStatus.TRUE: {PropertyStatus.OUTDATED, PropertyStatus.NON_REGRESSION, PropertyStatus.UNMAPPABLE},
    PropertyStatus.NON_REGRESSION: {PropertyStatus.VIOLATED, PropertyStatus.PRESERVED, PropertyStatus.UNCHECKED},
}


class Template(Enum):
    EQ_CONST = "EqConst"
    LOWER_BOUND = "LowerBound"
    UPPER_BOUND = "UpperBound"
    NON_ZERO = "NonZero"
    ONE_OF = "OneOf"
    REL_VAR_VAR = "RelVarVar"
    OFFSET_EQ = "OffsetEq"

    @property
    def rank(self) -> int:
        return list(Template).index(self)


REL_OPS = ("==", "!=", ">=", "<=")


@dataclass(frozen=True)
class PropertyFormula:
    template: Template
    variables: tuple[str, ...]
    constants: tuple[int, ...] = ()
    op: Optional[str] = None

    def sort_key(self):
        op_rank = REL_OPS.index(self.op) if self.op else -1
        return (self.template.rank, self.variables, op_rank, self.constants)

    def text(self) -> str:
        return print_expression(self.to_expression())

    def __str__(self):
        return self.text()

    def to_expression(self, rename: Optional[Callable[[str], Any]] = None):
        """MiniC expression for the formula; `rename` maps base variable names to replacements."""
        v = variable_expression(self.variables[0], rename)
        t = self.template
        if t is Template.EQ_CONST:
            return Binary("==", v, _literal(self.constants[0]))
        if t is Template.LOWER_BOUND:
            return Binary(">=", v, _literal(self.constants[0]))
        if t is Template.UPPER_BOUND:
            return Binary("<=", v, _literal(self.constants[0]))
        if t is Template.NON_ZERO:
            return Binary("!=", v, IntLit(0))
        if t is Template.ONE_OF:
            expr = None
            for c in self.constants:
                term = Binary("==", v, _literal(c))
                expr = term if expr is None else Binary("||", expr, term)
            return expr
        w = variable_expression(self.variables[1], rename)
        if t is Template.REL_VAR_VAR:
            return Binary(self.op, v, w)
        c = self.constants[0]
        if c < 0:
            return Binary("==", v, Binary("-", w, IntLit(-c)))
        return Binary("==", v, Binary("+", w, IntLit(c)))

    def evaluate(self, bindings, bit_width: int = 16) -> bool:
        v = bindings[self.variables[0]]
        t = self.template
        if t is Template.EQ_CONST:
            return v == self.constants[0]
        if t is Template.LOWER_BOUND:
            return v >= self.constants[0]
        if t is Template.UPPER_BOUND:
            return v <= self.constants[0]
        if t is Template.NON_ZERO:
            return v != 0
        if t is Template.ONE_OF:
            return v in self.constants
        w = bindings[self.variables[1]]
        if t is Template.REL_VAR_VAR:
            return {"==": v == w, "!=": v != w, ">=": v >= w, "<=": v <= w}[self.op]
        return v == wrap(w + self.constants[0], bit_width)


def _literal(value: int):
    return Unary("-", IntLit(-value)) if value < 0 else IntLit(value)


def variable_expression(name: str, rename=None):
    """Expression for a flattened variable name: `p.items` -> p.items, `a.2` -> a[2]."""
    base, _, key = name.partition(".")
    root = rename(base) if rename is not None else Var(base)
    if not key:
        return root
    if key.isdigit():
        return Index(root, IntLit(int(key)))
    return FieldAccess(root, key)


def EqConst(v, c):
    return PropertyFormula(Template.EQ_CONST, (v,), (c,))


def LowerBound(v, c):
    return PropertyFormula(Template.LOWER_BOUND, (v,), (c,))


def UpperBound(v, c):
    return PropertyFormula(Template.UPPER_BOUND, (v,), (c,))


def NonZero(v):
    return PropertyFormula(Template.NON_ZERO, (v,))


def OneOf(v, values):
    return PropertyFormula(Template.ONE_OF, (v,), tuple(sorted(set(values))))


def RelVarVar(v, op, w):
    if op not in REL_OPS:
        raise ValueError(f"unsupported relation {op!r}")
    return PropertyFormula(Template.REL_VAR_VAR, (v, w), (), op)


def OffsetEq(v, w, c):
    return PropertyFormula(Template.OFFSET_EQ, (v, w), (c,))


@dataclass(frozen=True)
class Property:
    point: ProgramPoint
    formula: PropertyFormula
    status: PropertyStatus = PropertyStatus.DYNAMIC
    # Counterexample when VIOLATED/FALSE, offending sample reference when OUTDATED
    evidence: Any = None
    verdict: Any = None

    @property
    def id(self) -> str:
        key = f"{self.point.function}:{self.point.kind_text()}:{self.formula.text()}"
        return hashlib.sha1(key.encode("utf-8")).hexdigest()[:12]

    @property
    def label(self) -> str:
        return f"p_{self.id}"

    def sort_key(self):
        return (self.point.sort_key(), self.formula.sort_key())

    def transition(self, status: PropertyStatus, evidence=None, verdict=None) -> "Property":
        if status not in _TRANSITIONS.get(self.status, ()):
            raise LifecycleError(f"property {self.id}: cannot move from {self.status.value} to {status.value}")
        return replace(
            self,
            status=status,
            evidence=evidence if evidence is not None else self.evidence,
            verdict=verdict if verdict is not None else self.verdict,
        )

    def describe(self) -> str:
        return f"{self.point} {self.formula.text()}"


def holds(prop: Property, sample: TraceSample, bit_width: int = 16) -> bool:
    """Evaluate a property on a sample taken at the same program point."""
    if sample.point != prop.point:
        raise PointMismatch(f"property at '{prop.point}' evaluated on a sample from '{sample.point}'")
    bindings = sample.bindings
    missing = [v for v in prop.formula.variables if v not in bindings]
    if missing:
        raise PointMismatch(f"sample at '{sample.point}' lacks variable(s) {', '.join(missing)}")
    return prop.formula.evaluate(bindings, bit_width)


def formula_to_expression(formula: PropertyFormula, rename=None):
    return formula.to_expression(rename)
