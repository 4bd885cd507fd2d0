"""One-property-per-line text format.

    TRUE available_products LOOP 0 total >= 0
    OUTDATED is_available EXIT return == 0 || return == 1
"""

from __future__ import annotations

from pathlib import Path

from ..minic.analyzer import PointKind, ProgramPoint
from ..minic.nodes import Binary, FieldAccess, Index, IntLit, Unary, Var
from ..minic.parser import parse_expression
from ..shared.errors import ParseError, PropertyFormatError
from .properties import (
    REL_OPS,
    EqConst,
    LowerBound,
    NonZero,
    OffsetEq,
    OneOf,
    Property,
    PropertyFormula,
    PropertyStatus,
    RelVarVar,
    UpperBound,
)


def format_property(prop: Property) -> str:
    return f"{prop.status.value} {prop.point.function} {prop.point.kind_text()} {prop.formula.text()}"


def format_properties(props) -> str:
    return "".join(format_property(p) + "\n" for p in props)


def write_properties(props, path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_properties(props), encoding="utf-8")
    return target


def _variable_name(expr):
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, FieldAccess) and isinstance(expr.base, Var):
        return f"{expr.base.name}.{expr.field}"
    if isinstance(expr, Index) and isinstance(expr.base, Var) and isinstance(expr.index, IntLit):
        return f"{expr.base.name}.{expr.index.value}"
    return None


def _constant(expr):
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Unary) and expr.op == "-" and isinstance(expr.operand, IntLit):
        return -expr.operand.value
    return None


def _disjuncts(expr):
    if isinstance(expr, Binary) and expr.op == "||":
        return _disjuncts(expr.left) + _disjuncts(expr.right)
    return [expr]


def formula_from_expression(expr) -> PropertyFormula:
    """Match a parsed MiniC expression onto one of the seven templates."""
    if isinstance(expr, Binary) and expr.op == "||":
        members = _disjuncts(expr)
        names = set()
        values = []
        for member in members:
            if not (isinstance(member, Binary) and member.op == "=="):
                break
            names.add(_variable_name(member.left))
            values.append(_constant(member.right))
        else:
            if len(names) == 1 and None not in names and None not in values and 2 <= len(set(values)) <= 3:
                return OneOf(names.pop(), values)
        raise ValueError("disjunction is not a one-of formula")
    if not isinstance(expr, Binary):
        raise ValueError("formula must be a comparison")
    v = _variable_name(expr.left)
    if v is None:
        raise ValueError("left side of a formula must be a variable")
    c = _constant(expr.right)
    w = _variable_name(expr.right)
    if c is not None:
        if expr.op == "==":
            return EqConst(v, c)
        if expr.op == ">=":
            return LowerBound(v, c)
        if expr.op == "<=":
            return UpperBound(v, c)
        if expr.op == "!=" and c == 0:
            return NonZero(v)
    elif w is not None and expr.op in REL_OPS:
        return RelVarVar(v, expr.op, w)
    elif expr.op == "==" and isinstance(expr.right, Binary) and expr.right.op in ("+", "-"):
        w = _variable_name(expr.right.left)
        offset = _constant(expr.right.right)
        if w is not None and offset is not None:
            return OffsetEq(v, w, offset if expr.right.op == "+" else -offset)
    raise ValueError("formula does not match any template")


def parse_formula(text: str) -> PropertyFormula:
    return formula_from_expression(parse_expression(text))


def parse_property(line: str, line_no=None) -> Property:
    parts = line.split()
    if len(parts) < 4:
        raise PropertyFormatError("expected '<status> <function> <kind> [ordinal] <formula>'", line_no)
    try:
        status = PropertyStatus(parts[0])
    except ValueError:
        raise PropertyFormatError(f"unknown status {parts[0]!r}", line_no) from None
    function, kind = parts[1], parts[2]
    rest = parts[3:]
    if kind == "LOOP":
        if not rest[0].isdigit() or len(rest) < 2:
            raise PropertyFormatError("LOOP point without an ordinal", line_no)
        point = ProgramPoint.loop(function, int(rest[0]))
        rest = rest[1:]
    elif kind in ("ENTRY", "EXIT"):
        point = ProgramPoint(function, PointKind(kind))
    else:
        raise PropertyFormatError(f"unknown point kind {kind!r}", line_no)
    try:
        formula = parse_formula(" ".join(rest))
    except (ParseError, ValueError) as exc:
        raise PropertyFormatError(f"bad formula: {exc}", line_no) from None
    return Property(point, formula, status)


def parse_properties(text: str) -> list[Property]:
    props = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            props.append(parse_property(line, line_no))
    return props


def read_properties(path) -> list[Property]:
    return parse_properties(Path(path).read_text(encoding="utf-8"))
