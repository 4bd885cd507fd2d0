"""Semantic analysis and the program-point model.

analyze() resolves names, checks types and arities, rejects recursion,
attaches the call graph and enumerates every program point of every
function together with the flattened variables observable there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from ..shared.errors import SemanticError
from .callgraph import CallGraph
from .nodes import (
    INT,
    VOID,
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
    contains_return,
    walk_statements,
)

# arrays expose at most this many elements to tracing and properties
MAX_ARRAY_VIEW = 8
RETURN_VAR = "return"


class PointKind(Enum):
    ENTRY = "ENTRY"
    LOOP = "LOOP"
    EXIT = "EXIT"

    @property
    def rank(self) -> int:
        return ("ENTRY", "LOOP", "EXIT").index(self.value)


@dataclass(frozen=True)
class ProgramPoint:
    function: str
    kind: PointKind
    ordinal: int = 0

    def sort_key(self):
        return (self.function, self.kind.rank, self.ordinal)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def kind_text(self) -> str:
        if self.kind is PointKind.LOOP:
            return f"LOOP {self.ordinal}"
        return self.kind.value

    def __str__(self):
        return f"{self.function} {self.kind_text()}"

    @classmethod
    def entry(cls, function):
        return cls(function, PointKind.ENTRY)

    @classmethod
    def exit(cls, function):
        return cls(function, PointKind.EXIT)

    @classmethod
    def loop(cls, function, ordinal):
        return cls(function, PointKind.LOOP, ordinal)


Cell = tuple  # (variable, None | field name | element index)


@dataclass(frozen=True)
class PointSchema:
    point: ProgramPoint
    variables: tuple[str, ...]
    cells: tuple[Cell, ...]

    def index_of(self, name) -> int:
        return self.variables.index(name)


def flatten(name, type_tag, records) -> list[tuple[str, Cell]]:
    """Flattened (display name, cell) pairs for one variable."""
    if isinstance(type_tag, RecordType):
        return [(f"{name}.{f}", (name, f)) for f in records[type_tag.name].fields]
    if isinstance(type_tag, ArrayType):
        return [(f"{name}.{i}", (name, i)) for i in range(min(type_tag.length, MAX_ARRAY_VIEW))]
    return [(name, (name, None))]


def _schema(point, declared, records) -> PointSchema:
    pairs = []
    for name, type_tag in declared:
        pairs.extend(flatten(name, type_tag, records))
    return PointSchema(point, tuple(n for n, _ in pairs), tuple(c for _, c in pairs))


@dataclass
class FunctionInfo:
    definition: FunctionDef
    path: str
    var_types: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    loops: dict = field(default_factory=dict)
    harness: bool = False

    @property
    def name(self) -> str:
        return self.definition.name

    def anchor_lines(self, point: ProgramPoint) -> list[int]:
        """Source lines a property at `point` is displayed against."""
        if point.kind is PointKind.ENTRY:
            return [self.definition.span.line]
        if point.kind is PointKind.LOOP:
            loop = self.loops.get(point.ordinal)
            return [loop.span.line] if loop is not None else []
        lines = [s.span.line for s in walk_statements(self.definition.body) if isinstance(s, Return)]
        if not lines and self.definition.body:
            lines = [self.definition.body[-1].span.line]
        return lines or [self.definition.span.line]


@dataclass
class AnalyzedUnit:
    sources: tuple[SourceUnit, ...]
    records: dict
    functions: dict
    call_graph: CallGraph

    def function(self, name) -> FunctionInfo:
        return self.functions[name]

    def schema(self, point: ProgramPoint) -> Optional[PointSchema]:
        info = self.functions.get(point.function)
        if info is None:
            return None
        return info.points.get(point)

    def schemas(self) -> list[PointSchema]:
        result = []
        for info in self.functions.values():
            result.extend(info.points.values())
        return sorted(result, key=lambda s: s.point.sort_key())

    def program_functions(self) -> list[str]:
        return [name for name, info in self.functions.items() if not info.harness]

    def source(self, path) -> SourceUnit:
        for unit in self.sources:
            if unit.path == path:
                return unit
        raise KeyError(path)

    def source_line(self, path, line) -> str:
        lines = self.source(path).text.splitlines()
        if 1 <= line <= len(lines):
            return lines[line - 1].strip()
        return ""

    def program_sources(self) -> tuple[SourceUnit, ...]:
        return tuple(u for u in self.sources if not u.harness)


class Analyzer:
    def __init__(self, sources):
        self.sources = tuple(sources)
        self.records: dict[str, RecordDecl] = {}
        self.functions: dict[str, FunctionInfo] = {}

    def analyze(self) -> AnalyzedUnit:
        for unit in self.sources:
            for record in unit.record_decls:
                self._declare_record(record)
        for unit in self.sources:
            for function in unit.functions:
                if function.name in self.functions:
                    raise _error(f"duplicate function '{function.name}'", function)
                self.functions[function.name] = FunctionInfo(function, unit.path, harness=unit.harness)
        for info in self.functions.values():
            self._check_signature(info.definition)
        for info in self.functions.values():
            self._check_function(info)
        call_graph = CallGraph.from_functions([info.definition for info in self.functions.values()])
        cycle = call_graph.cycle()
        if cycle is not None:
            first = self.functions[cycle[0]].definition
            raise _error(f"recursion detected: {' -> '.join(cycle + cycle[:1])}", first)
        for info in self.functions.values():
            info.points = self._points(info)
        return AnalyzedUnit(self.sources, dict(self.records), dict(self.functions), call_graph)

    # --- declarations ----------------------------------------------------

    def _declare_record(self, record: RecordDecl):
        if record.name in self.records:
            raise _error(f"duplicate record '{record.name}'", record)
        if not record.fields:
            raise _error(f"record '{record.name}' has no fields", record)
        if len(set(record.fields)) != len(record.fields):
            raise _error(f"duplicate field in record '{record.name}'", record)
        self.records[record.name] = record

    def _check_type(self, type_tag, node):
        if isinstance(type_tag, RecordType) and type_tag.name not in self.records:
            raise _error(f"unknown record '{type_tag.name}'", node)
        if isinstance(type_tag, ArrayType) and type_tag.length < 1:
            raise _error("array length must be at least 1", node)

    def _check_signature(self, function: FunctionDef):
        if function.return_type != VOID:
            self._check_type(function.return_type, function)
        seen = set()
        for param in function.params:
            if param.name in seen:
                raise _error(f"duplicate parameter '{param.name}'", param)
            seen.add(param.name)
            self._check_type(param.type, param)

    # --- bodies ----------------------------------------------------------

    def _check_function(self, info: FunctionInfo):
        function = info.definition
        info.var_types = {p.name: p.type for p in function.params}
        scopes = [set(info.var_types)]
        self._check_block(function.body, info, scopes)
        if function.return_type != VOID and not _always_returns(function.body):
            raise _error(f"function '{function.name}' may end without returning a value", function)

    def _check_block(self, stmts, info, scopes):
        scopes.append(set())
        for stmt in stmts:
            self._check_statement(stmt, info, scopes)
        scopes.pop()

    def _check_statement(self, stmt, info, scopes):
        function = info.definition
        if isinstance(stmt, VarDecl):
            if stmt.name in info.var_types:
                raise _error(f"redeclaration of '{stmt.name}'", stmt)
            self._check_type(stmt.type, stmt)
            if stmt.init is not None:
                self._expect_type(stmt.init, stmt.type, scopes, info, "initializer")
            info.var_types[stmt.name] = stmt.type
            scopes[-1].add(stmt.name)
        elif isinstance(stmt, Assign):
            target_type = self._type_of(stmt.target, scopes, info)
            self._expect_type(stmt.value, target_type, scopes, info, "assigned value")
        elif isinstance(stmt, If):
            self._expect_type(stmt.cond, INT, scopes, info, "condition")
            self._check_block(stmt.then, info, scopes)
            self._check_block(stmt.orelse, info, scopes)
        elif isinstance(stmt, While):
            self._expect_type(stmt.cond, INT, scopes, info, "condition")
            info.loops[stmt.ordinal] = stmt
            self._check_block(stmt.body, info, scopes)
        elif isinstance(stmt, Return):
            if function.return_type == VOID:
                if stmt.value is not None:
                    raise _error(f"void function '{function.name}' returns a value", stmt)
            elif stmt.value is None:
                raise _error(f"function '{function.name}' must return a value", stmt)
            else:
                self._expect_type(stmt.value, function.return_type, scopes, info, "return value")
        elif isinstance(stmt, ExprStmt):
            self._type_of(stmt.call, scopes, info, allow_void=True)
        elif isinstance(stmt, (Assume, Assert)):
            self._expect_type(stmt.cond, INT, scopes, info, "condition")

    def _expect_type(self, expr, expected, scopes, info, what):
        actual = self._type_of(expr, scopes, info)
        if actual != expected:
            raise _error(f"type mismatch in {what}: expected {expected}, found {actual}", expr)

    def _type_of(self, expr, scopes, info, allow_void=False):
        if isinstance(expr, IntLit):
            return INT
        if isinstance(expr, Var):
            if not any(expr.name in scope for scope in scopes):
                raise _error(f"undefined variable '{expr.name}'", expr)
            return info.var_types[expr.name]
        if isinstance(expr, FieldAccess):
            base = self._type_of(expr.base, scopes, info)
            if not isinstance(base, RecordType):
                raise _error(f"field access '.{expr.field}' on non-record value of type {base}", expr)
            if expr.field not in self.records[base.name].fields:
                raise _error(f"record '{base.name}' has no field '{expr.field}'", expr)
            return INT
        if isinstance(expr, Index):
            base = self._type_of(expr.base, scopes, info)
            if not isinstance(base, ArrayType):
                raise _error(f"indexing a non-array value of type {base}", expr)
            self._expect_type(expr.index, INT, scopes, info, "array index")
            return INT
        if isinstance(expr, Unary):
            self._expect_type(expr.operand, INT, scopes, info, f"operand of '{expr.op}'")
            return INT
        if isinstance(expr, Binary):
            self._expect_type(expr.left, INT, scopes, info, f"operand of '{expr.op}'")
            self._expect_type(expr.right, INT, scopes, info, f"operand of '{expr.op}'")
            return INT
        if isinstance(expr, Call):
            callee = self.functions.get(expr.name)
            if callee is None:
                raise _error(f"undefined function '{expr.name}'", expr)
            params = callee.definition.params
            if len(expr.args) != len(params):
                raise _error(
                    f"function '{expr.name}' expects {len(params)} argument(s), got {len(expr.args)}", expr
                )
            for arg, param in zip(expr.args, params):
                self._expect_type(arg, param.type, scopes, info, f"argument '{param.name}' of '{expr.name}'")
            result = callee.definition.return_type
            if result == VOID and not allow_void:
                raise _error(f"void function '{expr.name}' used as a value", expr)
            return result
        raise TypeError(f"not an expression: {expr!r}")

    # --- program points --------------------------------------------------

    def _points(self, info: FunctionInfo) -> dict:
        function = info.definition
        params = [(p.name, p.type) for p in function.params]
        points = {}
        entry = ProgramPoint.entry(function.name)
        points[entry] = _schema(entry, params, self.records)
        self._loop_points(function.name, function.body, list(params), points)
        # EXIT sees the top-level locals declared before the first statement that
        # can return: those are bound on every path reaching the exit.
        exit_vars = list(params)
        for stmt in function.body:
            if contains_return(stmt):
                break
            if isinstance(stmt, VarDecl):
                exit_vars.append((stmt.name, stmt.type))
        if function.return_type != VOID:
            exit_vars.append((RETURN_VAR, function.return_type))
        exit_point = ProgramPoint.exit(function.name)
        points[exit_point] = _schema(exit_point, exit_vars, self.records)
        return dict(sorted(points.items(), key=lambda item: item[0].sort_key()))

    def _loop_points(self, name, stmts, visible, points):
        visible = list(visible)
        for stmt in stmts:
            if isinstance(stmt, VarDecl):
                visible.append((stmt.name, stmt.type))
            elif isinstance(stmt, While):
                point = ProgramPoint.loop(name, stmt.ordinal)
                points[point] = _schema(point, visible, self.records)
                self._loop_points(name, stmt.body, visible, points)
            elif isinstance(stmt, If):
                self._loop_points(name, stmt.then, visible, points)
                self._loop_points(name, stmt.orelse, visible, points)


def _always_returns(stmts) -> bool:
    for stmt in stmts:
        if isinstance(stmt, Return):
            return True
        if isinstance(stmt, If) and stmt.orelse and _always_returns(stmt.then) and _always_returns(stmt.orelse):
            return True
    return False


def _error(message, node) -> SemanticError:
    span = getattr(node, "span", None)
    if span is None or span.line == 0:
        return SemanticError(message)
    return SemanticError(message, span.line, span.column)


def analyze(
    units: Union[SourceUnit, Iterable[SourceUnit]],
    against: Optional[AnalyzedUnit] = None,
) -> AnalyzedUnit:
    """Analyze one version (one or more source files).

    With `against`, the given units (typically test harnesses) are analyzed
    together with an already analyzed program and may call into it.
    """
    sources = (units,) if isinstance(units, SourceUnit) else tuple(units)
    if against is not None:
        sources = tuple(against.sources) + sources
    return Analyzer(sources).analyze()
