"""Symbolic encoding of a bounded program execution.

The instrumented program is executed symbolically from one entry function:
calls are inlined, each loop is unrolled `unroll_bound` times and every
variable is kept as a word-level term, so the environment is the
single-assignment form. Branches are executed on copies of the environment
and merged with guarded selections on the branch guards they end with.

Alongside the final state the encoder records an event list in program
order: one `StepEvent` per executed assignment and one `AssertEvent` per
assertion instance. Exactly one branch of every conditional is active under
a concrete input, so filtering events by their guards replays the
execution.

A call nested deeper than `inline_depth` is not inlined: its result
becomes a fresh unconstrained value and the callee is recorded as
truncated. Each assertion instance carries the condition under which such a
call already ran on its path, so the checker can tell exact failures from
ones that depend on a truncated call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..minic.analyzer import RETURN_VAR, AnalyzedUnit
from ..minic.nodes import (
    VOID,
    ArrayType,
    Assert,
    Assign,
    Assume,
    Binary,
    Call,
    ExprStmt,
    FieldAccess,
    If,
    Index,
    IntLit,
    RecordType,
    Return,
    Unary,
    Var,
    VarDecl,
    While,
    walk_expression,
)
from ..shared.errors import DepthExceeded
from .config import BmcConfig
from .instrument import RET_PREFIX
from .terms import Term, TermManager


@dataclass
class StepEvent:
    line: int
    path: str
    function: str
    guard: Term
    # (display name, symbolic index or None, value)
    bindings: list


@dataclass
class AssertEvent:
    label: str
    line: int
    path: str
    function: str
    guard: Term
    assumptions: Term
    cond: Term
    # true when a truncated call ran earlier on the path
    truncated: Term
    # flattened variable name -> term, for the variables the formula reads
    observed: dict = field(default_factory=dict)

    def failure(self, manager: TermManager) -> Term:
        return manager.conjoin([self.guard, self.assumptions, manager.not_(self.cond)])


@dataclass
class Encoding:
    entry: str
    manager: TermManager
    # entry parameter -> input term, dict of input terms, or list of input terms
    inputs: dict
    events: list
    assumptions: Term
    # satisfiable iff some input needs more loop iterations than the bound
    unwinding_failure: Term
    # functions whose calls were cut off by the inline depth
    truncated: frozenset = frozenset()

    def asserts(self, label=None) -> list[AssertEvent]:
        return [e for e in self.events if isinstance(e, AssertEvent) and (label is None or e.label == label)]

    def query(self, label) -> Term:
        """Failure of some instance of one assertion on a path where every call was inlined."""
        tm = self.manager
        return tm.disjoin(tm.and_(e.failure(tm), tm.not_(e.truncated)) for e in self.asserts(label))

    def truncated_query(self, label) -> Term:
        """Failure of some instance of one assertion after a truncated call."""
        tm = self.manager
        return tm.disjoin(tm.and_(e.failure(tm), e.truncated) for e in self.asserts(label))


class _Frame:
    def __init__(self, function, path, guard):
        self.function = function
        self.path = path
        self.guard = guard
        self.result = None
        self.returned = None


def _ret_temp(cond):
    for node in walk_expression(cond):
        if isinstance(node, Var) and node.name.startswith(RET_PREFIX):
            return node.name
    return None


class Encoder:
    def __init__(self, unit: AnalyzedUnit, cfg: BmcConfig, properties=None):
        self.unit = unit
        self.cfg = cfg
        self.properties = properties or {}
        self.tm = TermManager(cfg.bit_width)
        self.events = []
        self.assumptions = self.tm.true
        self.unwinding = self.tm.false
        self.depth = 0
        self.truncation = self.tm.false
        self.truncated = set()

    # --- values ------------------------------------------------------------

    def _fresh(self, name, type_tag):
        if isinstance(type_tag, RecordType):
            return {f: self.tm.input(f"{name}.{f}") for f in self.unit.records[type_tag.name].fields}
        if isinstance(type_tag, ArrayType):
            return [self.tm.input(f"{name}.{i}") for i in range(type_tag.length)]
        return self.tm.input(name)

    def _zero(self, type_tag):
        zero = self.tm.const(0)
        if isinstance(type_tag, RecordType):
            return {f: zero for f in self.unit.records[type_tag.name].fields}
        if isinstance(type_tag, ArrayType):
            return [zero] * type_tag.length
        return zero

    def _select(self, cond, a, b):
        if isinstance(a, dict):
            return {k: self.tm.ite(cond, a[k], b[k]) for k in a}
        if isinstance(a, list):
            return [self.tm.ite(cond, x, y) for x, y in zip(a, b)]
        return self.tm.ite(cond, a, b)

    @staticmethod
    def _copy(value):
        if isinstance(value, dict):
            return dict(value)
        if isinstance(value, list):
            return list(value)
        return value

    def _cells(self, name, value):
        if isinstance(value, dict):
            return [(f"{name}.{k}", None, v) for k, v in value.items()]
        if isinstance(value, list):
            return [(f"{name}[{i}]", None, v) for i, v in enumerate(value)]
        return [(name, None, value)]

    def _assume(self, guard, cond):
        self.assumptions = self.tm.and_(self.assumptions, self.tm.implies(guard, cond))

    # --- entry ---------------------------------------------------------------

    def encode(self, entry: str) -> Encoding:
        info = self.unit.function(entry)
        inputs = {p.name: self._fresh(p.name, p.type) for p in info.definition.params}
        self._inline(entry, [self._copy(inputs[p.name]) for p in info.definition.params], self.tm.true)
        return Encoding(
            entry, self.tm, inputs, self.events, self.assumptions, self.unwinding, frozenset(self.truncated)
        )

    def _inline(self, name, args, guard):
        info = self.unit.function(name)
        frame = _Frame(name, info.path, guard)
        env = {p.name: a for p, a in zip(info.definition.params, args)}
        self._block(info.definition.body, env, frame)
        if frame.result is None and info.definition.return_type != VOID:
            # only reached under an infeasible guard
            return self._zero(info.definition.return_type)
        return frame.result

    # --- statements --------------------------------------------------------

    def _step(self, stmt, frame, bindings):
        self.events.append(StepEvent(stmt.span.line, frame.path, frame.function, frame.guard, bindings))

    def _block(self, stmts, env, frame):
        for stmt in stmts:
            if frame.guard is self.tm.false:
                return
            self._statement(stmt, env, frame)

    def _statement(self, stmt, env, frame):
        tm = self.tm
        if isinstance(stmt, VarDecl):
            value = self._copy(self.eval(stmt.init, env, frame)) if stmt.init is not None else self._zero(stmt.type)
            env[stmt.name] = value
            display = RETURN_VAR if stmt.name.startswith(RET_PREFIX) else stmt.name
            self._step(stmt, frame, self._cells(display, value))
        elif isinstance(stmt, Assign):
            self._assign(stmt, env, frame)
        elif isinstance(stmt, If):
            cond = tm.truthy(self.eval(stmt.cond, env, frame))
            self._branch(cond, stmt.then, stmt.orelse, env, frame)
        elif isinstance(stmt, While):
            self._loop(stmt, env, frame)
        elif isinstance(stmt, Return):
            value = self._copy(self.eval(stmt.value, env, frame)) if stmt.value is not None else None
            temp = isinstance(stmt.value, Var) and stmt.value.name.startswith(RET_PREFIX)
            if value is not None and not temp:
                self._step(stmt, frame, self._cells(RETURN_VAR, value))
            if value is not None:
                frame.result = value if frame.result is None else self._select(frame.guard, value, frame.result)
            frame.guard = tm.false
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.call, env, frame)
        elif isinstance(stmt, Assume):
            self._assume(frame.guard, tm.truthy(self.eval(stmt.cond, env, frame)))
        elif isinstance(stmt, Assert):
            self._assert(stmt, env, frame)
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def _assign(self, stmt, env, frame):
        value = self._copy(self.eval(stmt.value, env, frame))
        target = stmt.target
        if isinstance(target, Var):
            env[target.name] = value
            self._step(stmt, frame, self._cells(target.name, value))
        elif isinstance(target, FieldAccess):
            env[target.base.name][target.field] = value
            self._step(stmt, frame, [(f"{target.base.name}.{target.field}", None, value)])
        else:
            name = target.base.name
            array = env[name]
            index = self.eval(target.index, env, frame)
            if index.is_const:
                self._check_bounds(index, len(array), frame)
                if 0 <= index.value < len(array):
                    array[index.value] = value
            else:
                self._check_bounds(index, len(array), frame)
                for i in range(len(array)):
                    array[i] = self.tm.ite(self.tm.eq(index, self.tm.const(i)), value, array[i])
            self._step(stmt, frame, [(name, index, value)])

    def _assert(self, stmt, env, frame):
        cond = self.tm.truthy(self.eval(stmt.cond, env, frame))
        observed = {}
        prop = self.properties.get(stmt.label)
        if prop is not None:
            temp = _ret_temp(stmt.cond)
            for variable in prop.formula.variables:
                base, _, key = variable.partition(".")
                source = temp if base == RETURN_VAR and temp is not None else base
                value = env.get(source)
                if value is None:
                    continue
                observed[variable] = value[int(key) if key.isdigit() else key] if key else value
        self.events.append(
            AssertEvent(
                stmt.label,
                stmt.span.line,
                frame.path,
                frame.function,
                frame.guard,
                self.assumptions,
                cond,
                self.truncation,
                observed,
            )
        )

    def _branch(self, cond, then, orelse, env, frame):
        tm = self.tm
        entry_guard = frame.guard
        then_env = {k: self._copy(v) for k, v in env.items()}
        frame.guard = tm.and_(entry_guard, cond)
        self._block(then, then_env, frame)
        then_guard = frame.guard
        else_env = {k: self._copy(v) for k, v in env.items()}
        frame.guard = tm.and_(entry_guard, tm.not_(cond))
        self._block(orelse, else_env, frame)
        else_guard = frame.guard
        frame.guard = tm.or_(then_guard, else_guard)
        # block-local declarations go out of scope here
        for name in env:
            env[name] = self._select(then_guard, then_env[name], else_env[name])

    def _loop(self, stmt, env, frame):
        for _ in range(self.cfg.unroll_bound):
            if frame.guard is self.tm.false:
                return
            cond = self.tm.truthy(self.eval(stmt.cond, env, frame))
            self._branch(cond, stmt.body, (), env, frame)
        if frame.guard is self.tm.false:
            return
        cond = self.tm.truthy(self.eval(stmt.cond, env, frame))
        still_running = self.tm.and_(frame.guard, cond)
        self.unwinding = self.tm.or_(self.unwinding, self.tm.and_(still_running, self.assumptions))
        self._assume(frame.guard, self.tm.not_(cond))
        frame.guard = self.tm.and_(frame.guard, self.tm.not_(cond))

    def _check_bounds(self, index, length, frame):
        tm = self.tm
        in_bounds = tm.and_(tm.sle(tm.const(0), index), tm.slt(index, tm.const(length)))
        self._assume(frame.guard, in_bounds)

    # --- expressions -------------------------------------------------------

    def eval(self, expr, env, frame):
        tm = self.tm
        if isinstance(expr, IntLit):
            return tm.const(expr.value)
        if isinstance(expr, Var):
            return env[expr.name]
        if isinstance(expr, FieldAccess):
            return self.eval(expr.base, env, frame)[expr.field]
        if isinstance(expr, Index):
            array = self.eval(expr.base, env, frame)
            index = self.eval(expr.index, env, frame)
            self._check_bounds(index, len(array), frame)
            if index.is_const:
                return array[index.value] if 0 <= index.value < len(array) else tm.const(0)
            result = array[0]
            for i in range(1, len(array)):
                result = tm.ite(tm.eq(index, tm.const(i)), array[i], result)
            return result
        if isinstance(expr, Unary):
            operand = self.eval(expr.operand, env, frame)
            if expr.op == "-":
                return tm.neg(operand)
            return tm.from_bool(tm.eq(operand, tm.const(0)))
        if isinstance(expr, Binary):
            return self._binary(expr, env, frame)
        if isinstance(expr, Call):
            args = [self._copy(self.eval(a, env, frame)) for a in expr.args]
            try:
                return self._call(expr.name, args, frame)
            except DepthExceeded:
                return self._truncate(expr.name, frame)
        raise TypeError(f"not an expression: {expr!r}")

    def _call(self, name, args, frame):
        if self.depth + 1 > self.cfg.inline_depth:
            raise DepthExceeded(f"call nesting deeper than {self.cfg.inline_depth} at '{name}'")
        self.depth += 1
        try:
            return self._inline(name, args, frame.guard)
        finally:
            self.depth -= 1

    def _truncate(self, name, frame):
        """Stand in for a call past the inline depth with an unconstrained result."""
        self.truncated.add(name)
        self.truncation = self.tm.or_(self.truncation, frame.guard)
        return_type = self.unit.function(name).definition.return_type
        if return_type == VOID:
            return None
        return self._fresh(f"__{name}#{len(self.tm.inputs)}", return_type)

    def _binary(self, expr, env, frame):
        tm = self.tm
        left = self.eval(expr.left, env, frame)
        if expr.op in ("&&", "||"):
            lhs = tm.truthy(left)
            saved = frame.guard
            frame.guard = tm.and_(saved, lhs if expr.op == "&&" else tm.not_(lhs))
            try:
                rhs = tm.truthy(self.eval(expr.right, env, frame))
            finally:
                frame.guard = saved
            return tm.from_bool(tm.and_(lhs, rhs) if expr.op == "&&" else tm.or_(lhs, rhs))
        right = self.eval(expr.right, env, frame)
        op = expr.op
        if op == "+":
            return tm.add(left, right)
        if op == "-":
            return tm.sub(left, right)
        if op == "*":
            return tm.mul(left, right)
        if op == "/":
            return tm.sdiv(left, right)
        if op == "%":
            return tm.srem(left, right)
        if op == "<":
            return tm.from_bool(tm.slt(left, right))
        if op == "<=":
            return tm.from_bool(tm.sle(left, right))
        if op == ">":
            return tm.from_bool(tm.slt(right, left))
        if op == ">=":
            return tm.from_bool(tm.sle(right, left))
        if op == "==":
            return tm.from_bool(tm.eq(left, right))
        if op == "!=":
            return tm.from_bool(tm.not_(tm.eq(left, right)))
        raise ValueError(f"unknown operator {op!r}")


def encode(unit: AnalyzedUnit, entry: str, cfg: Optional[BmcConfig] = None, properties=None) -> Encoding:
    """Encode every bounded execution of `entry`; calls past the inline depth are truncated."""
    return Encoder(unit, cfg or BmcConfig(), properties).encode(entry)
