"""Likely-property inference and the property lifecycle."""

from .engine import infer, infer_point
from .properties import (
    EqConst,
    LowerBound,
    NonZero,
    OffsetEq,
    OneOf,
    Property,
    PropertyFormula,
    PropertyStatus,
    RelVarVar,
    Template,
    UpperBound,
    formula_to_expression,
    holds,
)
from .serialization import (
    format_properties,
    parse_formula,
    parse_properties,
    parse_property,
    read_properties,
    write_properties,
)

__all__ = [
    "EqConst",
    "LowerBound",
    "NonZero",
    "OffsetEq",
    "OneOf",
    "Property",
    "PropertyFormula",
    "PropertyStatus",
    "RelVarVar",
    "Template",
    "UpperBound",
    "format_properties",
    "formula_to_expression",
    "holds",
    "infer",
    "infer_point",
    "parse_formula",
    "parse_properties",
    "parse_property",
    "read_properties",
    "write_properties",
]
