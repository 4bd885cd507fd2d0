"""Pretty printer for MiniC.

Printing is the inverse of parsing up to layout: parse(pretty_print(u)) is
structurally identical to u. The printer can also report, for every output
line, the source line of the node that produced it; instrumentation uses
that to map line numbers back to the unmodified program.
"""

from __future__ import annotations

from typing import Optional

from .nodes import (
    ArrayType,
    Assert,
    Assign,
    Assume,
    Binary,
    Call,
    ExprStmt,
    FieldAccess,
    FunctionDef,
    If,
    Index,
    IntLit,
    RecordDecl,
    RecordType,
    Return,
    SourceUnit,
    Unary,
    Var,
    VarDecl,
    While,
)

_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY_PRECEDENCE = 7
_POSTFIX_PRECEDENCE = 8
INDENT = "    "


def _precedence(expr) -> int:
    if isinstance(expr, Binary):
        return _PRECEDENCE[expr.op]
    if isinstance(expr, Unary):
        return _UNARY_PRECEDENCE
    return _POSTFIX_PRECEDENCE


def print_expression(expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, FieldAccess):
        return f"{_wrap(expr.base, _POSTFIX_PRECEDENCE)}.{expr.field}"
    if isinstance(expr, Index):
        return f"{_wrap(expr.base, _POSTFIX_PRECEDENCE)}[{print_expression(expr.index)}]"
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(print_expression(a) for a in expr.args)})"
    if isinstance(expr, Unary):
        return f"{expr.op}{_wrap(expr.operand, _UNARY_PRECEDENCE)}"
    if isinstance(expr, Binary):
        level = _PRECEDENCE[expr.op]
        left = _wrap(expr.left, level)
        # binary operators are left-associative: an equal-level right child needs parentheses
        right = _wrap(expr.right, level + 1)
        return f"{left} {expr.op} {right}"
    raise TypeError(f"not an expression: {expr!r}")


def _wrap(expr, min_level) -> str:
    text = print_expression(expr)
    if _precedence(expr) < min_level:
        return f"({text})"
    return text


def _type_prefix(type_tag) -> str:
    if isinstance(type_tag, RecordType):
        return type_tag.name
    return "int"


class Printer:
    """Accumulates printed lines together with their originating source line."""

    def __init__(self):
        self.lines: list[str] = []
        self.origins: list[Optional[int]] = []

    def emit(self, depth, text, origin):
        self.lines.append(INDENT * depth + text)
        self.origins.append(origin if origin else None)

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")

    def print_unit(self, unit: SourceUnit):
        first = True
        for record in unit.record_decls:
            if not first:
                self.emit(0, "", None)
            self.print_record(record)
            first = False
        for function in unit.functions:
            if not first:
                self.emit(0, "", None)
            self.print_function(function)
            first = False

    def print_record(self, record: RecordDecl):
        self.emit(0, f"record {record.name} {{", record.span.line)
        for name in record.fields:
            self.emit(1, f"int {name};", record.span.line)
        self.emit(0, "}", record.span.line)

    def print_function(self, function: FunctionDef):
        ret = function.return_type
        ret_text = f"int[{ret.length}]" if isinstance(ret, ArrayType) else str(ret)
        params = ", ".join(_param_text(p.name, p.type) for p in function.params)
        self.emit(0, f"{ret_text} {function.name}({params}) {{", function.span.line)
        self.print_block(function.body, 1)
        self.emit(0, "}", None)

    def print_block(self, stmts, depth):
        for stmt in stmts:
            self.print_statement(stmt, depth)

    def print_statement(self, stmt, depth):
        line = stmt.span.line
        if isinstance(stmt, VarDecl):
            head = _param_text(stmt.name, stmt.type)
            if isinstance(stmt.type, RecordType):
                head = f"{stmt.type.name} {stmt.name}"
            if stmt.init is not None:
                head += f" = {print_expression(stmt.init)}"
            self.emit(depth, head + ";", line)
        elif isinstance(stmt, Assign):
            self.emit(depth, f"{print_expression(stmt.target)} = {print_expression(stmt.value)};", line)
        elif isinstance(stmt, If):
            self._print_if(stmt, depth, "if")
        elif isinstance(stmt, While):
            self.emit(depth, f"while ({print_expression(stmt.cond)}) {{", line)
            self.print_block(stmt.body, depth + 1)
            self.emit(depth, "}", None)
        elif isinstance(stmt, Return):
            if stmt.value is None:
                self.emit(depth, "return;", line)
            else:
                self.emit(depth, f"return {print_expression(stmt.value)};", line)
        elif isinstance(stmt, ExprStmt):
            self.emit(depth, f"{print_expression(stmt.call)};", line)
        elif isinstance(stmt, Assume):
            self.emit(depth, f"assume({print_expression(stmt.cond)});", line)
        elif isinstance(stmt, Assert):
            self.emit(depth, f"assert {stmt.label}: {print_expression(stmt.cond)};", line)
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def _print_if(self, stmt: If, depth, keyword):
        line = stmt.span.line
        self.emit(depth, f"{keyword} ({print_expression(stmt.cond)}) {{", line)
        self.print_block(stmt.then, depth + 1)
        if len(stmt.orelse) == 1 and isinstance(stmt.orelse[0], If):
            self._print_if(stmt.orelse[0], depth, "} else if")
            return
        if stmt.orelse:
            self.emit(depth, "} else {", None)
            self.print_block(stmt.orelse, depth + 1)
        self.emit(depth, "}", None)


def _param_text(name, type_tag) -> str:
    if isinstance(type_tag, ArrayType):
        return f"int {name}[{type_tag.length}]"
    return f"{_type_prefix(type_tag)} {name}"


def pretty_print(unit: SourceUnit) -> str:
    printer = Printer()
    printer.print_unit(unit)
    return printer.text()


def print_with_origins(unit: SourceUnit):
    """Return (text, origins) where origins[i] is the source line behind output line i+1."""
    printer = Printer()
    printer.print_unit(unit)
    return printer.text(), printer.origins
