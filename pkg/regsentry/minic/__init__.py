"""MiniC frontend: lexer, parser, printer and semantic analysis."""

from .analyzer import (
    RETURN_VAR,
    AnalyzedUnit,
    FunctionInfo,
    PointKind,
    PointSchema,
    ProgramPoint,
    analyze,
    flatten,
)
from .callgraph import CallGraph, callees_of, callers_of
from .parser import parse, parse_expression, parse_file
from .printer import pretty_print, print_expression

__all__ = [
    "RETURN_VAR",
    "AnalyzedUnit",
    "CallGraph",
    "FunctionInfo",
    "PointKind",
    "PointSchema",
    "ProgramPoint",
    "analyze",
    "callees_of",
    "callers_of",
    "flatten",
    "parse",
    "parse_expression",
    "parse_file",
    "pretty_print",
    "print_expression",
]
