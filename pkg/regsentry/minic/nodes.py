"""Abstract syntax of MiniC.

Every node is an immutable dataclass. Source spans never take part in
equality, so two trees compare equal exactly when they are structurally
identical; version differencing relies on this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    line: int
    column: int


NO_SPAN = Span(0, 0)


def _span():
    return field(default=NO_SPAN, compare=False, repr=False)


# --- Types ---------------------------------------------------------------


@dataclass(frozen=True)
class IntType:
    def __str__(self):
        return "int"


@dataclass(frozen=True)
class VoidType:
    def __str__(self):
        return "void"


@dataclass(frozen=True)
class RecordType:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ArrayType:
    length: int

    def __str__(self):
        return f"int[{self.length}]"


INT = IntType()
VOID = VoidType()

TypeTag = Union[IntType, RecordType, ArrayType]


# --- Expressions ---------------------------------------------------------


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class FieldAccess:
    base: "Expr"
    field: str
    span: Span = _span()


@dataclass(frozen=True)
class Index:
    base: "Expr"
    index: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Expr", ...]
    span: Span = _span()


Expr = Union[IntLit, Var, FieldAccess, Index, Unary, Binary, Call]

RELATIONAL_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGICAL_OPS = ("&&", "||")
ARITHMETIC_OPS = ("+", "-", "*", "/", "%")


# --- Statements ----------------------------------------------------------


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: TypeTag
    init: Optional[Expr]
    span: Span = _span()


@dataclass(frozen=True)
class Assign:
    target: Expr  # Var, FieldAccess(Var) or Index(Var)
    value: Expr
    span: Span = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...]
    span: Span = _span()


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple["Stmt", ...]
    span: Span = _span()
    # preorder index of the loop inside its function
    ordinal: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Return:
    value: Optional[Expr]
    span: Span = _span()


@dataclass(frozen=True)
class ExprStmt:
    call: Call
    span: Span = _span()


@dataclass(frozen=True)
class Assume:
    cond: Expr
    span: Span = _span()


@dataclass(frozen=True)
class Assert:
    label: str
    cond: Expr
    span: Span = _span()


Stmt = Union[VarDecl, Assign, If, While, Return, ExprStmt, Assume, Assert]


# --- Declarations --------------------------------------------------------


@dataclass(frozen=True)
class Param:
    name: str
    type: TypeTag
    span: Span = _span()


@dataclass(frozen=True)
class FunctionDef:
    name: str
    params: tuple[Param, ...]
    return_type: Union[TypeTag, VoidType]
    body: tuple[Stmt, ...]
    span: Span = _span()


@dataclass(frozen=True)
class RecordDecl:
    name: str
    fields: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class SourceUnit:
    path: str
    record_decls: tuple[RecordDecl, ...]
    functions: tuple[FunctionDef, ...]
    harness: bool = field(default=False, compare=False)
    text: str = field(default="", compare=False, repr=False)


def walk_statements(stmts):
    """Yield every statement of a body in preorder."""
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, If):
            yield from walk_statements(stmt.then)
            yield from walk_statements(stmt.orelse)
        elif isinstance(stmt, While):
            yield from walk_statements(stmt.body)


def statement_expressions(stmt):
    """Top-level expressions owned directly by one statement."""
    if isinstance(stmt, VarDecl):
        return (stmt.init,) if stmt.init is not None else ()
    if isinstance(stmt, Assign):
        return (stmt.target, stmt.value)
    if isinstance(stmt, (If, While, Assume, Assert)):
        return (stmt.cond,)
    if isinstance(stmt, Return):
        return (stmt.value,) if stmt.value is not None else ()
    if isinstance(stmt, ExprStmt):
        return (stmt.call,)
    return ()


def walk_expression(expr):
    yield expr
    if isinstance(expr, (FieldAccess,)):
        yield from walk_expression(expr.base)
    elif isinstance(expr, Index):
        yield from walk_expression(expr.base)
        yield from walk_expression(expr.index)
    elif isinstance(expr, Unary):
        yield from walk_expression(expr.operand)
    elif isinstance(expr, Binary):
        yield from walk_expression(expr.left)
        yield from walk_expression(expr.right)
    elif isinstance(expr, Call):
        for arg in expr.args:
            yield from walk_expression(arg)


def calls_in(stmts):
    """Names of every function called anywhere in a body, in source order."""
    for stmt in walk_statements(stmts):
        for expr in statement_expressions(stmt):
            for node in walk_expression(expr):
                if isinstance(node, Call):
                    yield node.name


def contains_return(stmt) -> bool:
    return any(isinstance(s, Return) for s in walk_statements((stmt,)))
