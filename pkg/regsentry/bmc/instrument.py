"""Source-to-source insertion of property assertions.

Functions carrying properties are rewritten with labelled `assert`
statements, their files are pretty-printed and re-parsed in harness mode,
and every instrumented line is mapped back to a line of the unmodified
source.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from ..inference.properties import Property
from ..minic.analyzer import RETURN_VAR, AnalyzedUnit, PointKind, analyze
from ..minic.nodes import (
    NO_SPAN,
    VOID,
    Assert,
    FunctionDef,
    If,
    Return,
    SourceUnit,
    Var,
    VarDecl,
    While,
)
from ..minic.parser import parse
from ..minic.printer import print_with_origins
from ..shared.logger import log

RET_PREFIX = "__ret_"


@dataclass
class InstrumentedUnit:
    unit: AnalyzedUnit
    original: AnalyzedUnit
    # (path, instrumented line) -> original line
    line_map: dict
    properties: dict = field(default_factory=dict)
    unmappable: list = field(default_factory=list)

    def original_line(self, path, line) -> int:
        return self.line_map.get((path, line), line)

    def original_text(self, path, line) -> str:
        return self.original.source_line(path, self.original_line(path, line))

    def write_sources(self, directory) -> list[Path]:
        written = []
        for source in self.unit.program_sources():
            target = Path(directory) / Path(source.path).name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(source.text, encoding="utf-8")
            written.append(target)
        return written


def _mappable(unit: AnalyzedUnit, prop: Property) -> bool:
    schema = unit.schema(prop.point)
    return schema is not None and all(v in schema.variables for v in prop.formula.variables)


def _asserts(props, rename=None, span=NO_SPAN):
    def resolve(base):
        return rename(base) if rename is not None else Var(base)

    return [Assert(p.label, p.formula.to_expression(resolve), span=span) for p in props]


class _FunctionRewriter:
    def __init__(self, definition: FunctionDef, by_point):
        self.definition = definition
        self.entry = by_point.get(PointKind.ENTRY, [])
        self.exit = by_point.get(PointKind.EXIT, [])
        self.loops = by_point.get(PointKind.LOOP, {})
        self.temps = 0

    def rewrite(self) -> FunctionDef:
        body = list(_asserts(self.entry)) + self._block(self.definition.body)
        if self.definition.return_type == VOID and self.exit and not _ends_with_return(self.definition.body):
            body += _asserts(self.exit)
        return replace(self.definition, body=tuple(body))

    def _block(self, stmts) -> list:
        out = []
        for stmt in stmts:
            out.extend(self._statement(stmt))
        return out

    def _statement(self, stmt) -> list:
        if isinstance(stmt, If):
            return [replace(stmt, then=tuple(self._block(stmt.then)), orelse=tuple(self._block(stmt.orelse)))]
        if isinstance(stmt, While):
            props = self.loops.get(stmt.ordinal, [])
            head = _asserts(props, span=stmt.span)
            body = head + self._block(stmt.body) + head
            return _asserts(props) + [replace(stmt, body=tuple(body))]
        if isinstance(stmt, Return) and self.exit:
            if stmt.value is None:
                return _asserts(self.exit) + [stmt]
            temp = f"{RET_PREFIX}{self.temps}"
            self.temps += 1

            def rename(base):
                return Var(temp) if base == RETURN_VAR else Var(base)

            return [
                VarDecl(temp, self.definition.return_type, stmt.value, span=stmt.span),
                *_asserts(self.exit, rename),
                Return(Var(temp), span=stmt.span),
            ]
        return [stmt]


def _ends_with_return(stmts) -> bool:
    return bool(stmts) and isinstance(stmts[-1], Return)


def _line_map(path, origins) -> dict:
    """Inserted lines take the nearest following original line, trailing ones the preceding."""
    mapping = {}
    following = None
    for index in reversed(range(len(origins))):
        following = origins[index] or following
        mapping[(path, index + 1)] = following
    preceding = 1
    for index, origin in enumerate(origins):
        key = (path, index + 1)
        if origin is not None:
            preceding = origin
        if mapping[key] is None:
            mapping[key] = preceding
    return mapping


def instrument(unit: AnalyzedUnit, props) -> InstrumentedUnit:
    """Insert one labelled assertion per property occurrence; unmappable properties are set aside."""
    mapped = {}
    unmappable = []
    per_function = {}
    for prop in sorted(props, key=lambda p: p.sort_key()):
        if not _mappable(unit, prop):
            unmappable.append(prop)
            continue
        mapped[prop.label] = prop
        groups = per_function.setdefault(prop.point.function, {})
        if prop.point.kind is PointKind.LOOP:
            groups.setdefault(PointKind.LOOP, {}).setdefault(prop.point.ordinal, []).append(prop)
        else:
            groups.setdefault(prop.point.kind, []).append(prop)

    sources = []
    line_map = {}
    for source in unit.sources:
        touched = [f for f in source.functions if f.name in per_function]
        if not touched or source.harness:
            sources.append(source)
            for line in range(1, len(source.text.splitlines()) + 1):
                line_map[(source.path, line)] = line
            continue
        functions = tuple(
            _FunctionRewriter(f, per_function[f.name]).rewrite() if f.name in per_function else f
            for f in source.functions
        )
        rewritten = SourceUnit(source.path, source.record_decls, functions, harness=True, text=source.text)
        text, origins = print_with_origins(rewritten)
        # harness mode admits the inserted asserts and temporaries
        sources.append(replace(parse(text, path=source.path, harness=True), harness=False))
        line_map.update(_line_map(source.path, origins))

    instrumented = analyze(sources) if per_function else unit
    if unmappable:
        log(f"{len(unmappable)} propert{'y' if len(unmappable) == 1 else 'ies'} unmappable", filter_tag="BMC")
    return InstrumentedUnit(instrumented, unit, line_map, mapped, unmappable)


def _strip_block(stmts) -> tuple:
    kept = []
    for stmt in stmts:
        if isinstance(stmt, Assert):
            continue
        if isinstance(stmt, If):
            stmt = replace(stmt, then=_strip_block(stmt.then), orelse=_strip_block(stmt.orelse))
        elif isinstance(stmt, While):
            stmt = replace(stmt, body=_strip_block(stmt.body))
        elif (
            isinstance(stmt, Return)
            and isinstance(stmt.value, Var)
            and stmt.value.name.startswith(RET_PREFIX)
            and kept
            and isinstance(kept[-1], VarDecl)
            and kept[-1].name == stmt.value.name
        ):
            stmt = Return(kept.pop().init, span=stmt.span)
        kept.append(stmt)
    return tuple(kept)


def strip_instrumentation(iu: InstrumentedUnit) -> tuple[FunctionDef, ...]:
    """Program functions with every inserted assertion and return temporary removed."""
    return tuple(
        replace(info.definition, body=_strip_block(info.definition.body))
        for info in iu.unit.functions.values()
        if not info.harness
    )
