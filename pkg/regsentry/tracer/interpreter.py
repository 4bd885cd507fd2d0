"""Deterministic MiniC interpreter with program-point sampling.

Integers are W-bit two's complement and wrap on overflow. Division is total:
x / 0 == 0 and x % 0 == x; otherwise it truncates toward zero as in C.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..minic.analyzer import RETURN_VAR, AnalyzedUnit, PointSchema, ProgramPoint
from ..minic.nodes import (
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
)
from ..shared.errors import AssertionViolation, AssumptionFailed, RuntimeFault

STEP_BUDGET = 10**6


def wrap(value: int, width: int) -> int:
    half = 1 << (width - 1)
    return ((value + half) % (1 << width)) - half


def c_div(a: int, b: int, width: int) -> int:
    if b == 0:
        return 0
    quotient = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        quotient = -quotient
    return wrap(quotient, width)


def c_rem(a: int, b: int, width: int) -> int:
    if b == 0:
        return a
    remainder = abs(a) % abs(b)
    return wrap(-remainder if a < 0 else remainder, width)


def binary_op(op: str, a: int, b: int, width: int) -> int:
    """Evaluate a non-short-circuit binary operator on W-bit values."""
    if op == "+":
        return wrap(a + b, width)
    if op == "-":
        return wrap(a - b, width)
    if op == "*":
        return wrap(a * b, width)
    if op == "/":
        return c_div(a, b, width)
    if op == "%":
        return c_rem(a, b, width)
    if op == "<":
        return int(a < b)
    if op == "<=":
        return int(a <= b)
    if op == ">":
        return int(a > b)
    if op == ">=":
        return int(a >= b)
    if op == "==":
        return int(a == b)
    if op == "!=":
        return int(a != b)
    raise ValueError(f"unknown operator {op!r}")


@dataclass(frozen=True)
class TraceSample:
    point: ProgramPoint
    variables: tuple[str, ...]
    values: tuple[int, ...]
    test: str
    sequence: int

    @property
    def bindings(self) -> dict:
        return dict(zip(self.variables, self.values))


def copy_value(value):
    if isinstance(value, dict):
        return dict(value)
    if isinstance(value, list):
        return list(value)
    return value


def read_cell(env, cell):
    name, key = cell
    value = env[name]
    return value if key is None else value[key]


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class Interpreter:
    """Executes functions of an analyzed unit.

    Samples are produced for activations of functions in `monitored`.
    """

    def __init__(
        self,
        unit: AnalyzedUnit,
        bit_width: int = 16,
        monitored=frozenset(),
        test_name: str = "",
        step_budget: int = STEP_BUDGET,
    ):
        self.unit = unit
        self.width = bit_width
        self.monitored = frozenset(monitored)
        self.test_name = test_name
        self.step_budget = step_budget
        self.steps = 0
        self.sequence = 0
        self.samples: list[TraceSample] = []

    # --- values ----------------------------------------------------------

    def zero(self, type_tag):
        if isinstance(type_tag, RecordType):
            return {f: 0 for f in self.unit.records[type_tag.name].fields}
        if isinstance(type_tag, ArrayType):
            return [0] * type_tag.length
        return 0

    def normalize(self, value, type_tag):
        """Coerce a caller-supplied argument into a W-bit value of `type_tag`."""
        if isinstance(type_tag, RecordType):
            fields = self.unit.records[type_tag.name].fields
            return {f: wrap(int(value[f]), self.width) for f in fields}
        if isinstance(type_tag, ArrayType):
            if len(value) != type_tag.length:
                raise RuntimeFault(f"expected {type_tag.length} array elements, got {len(value)}")
            return [wrap(int(v), self.width) for v in value]
        return wrap(int(value), self.width)

    # --- sampling --------------------------------------------------------

    def _sample(self, schema: PointSchema, env):
        values = tuple(read_cell(env, cell) for cell in schema.cells)
        self.samples.append(TraceSample(schema.point, schema.variables, values, self.test_name, self.sequence))
        self.sequence += 1

    # --- execution -------------------------------------------------------

    def call(self, name: str, args=()):
        info = self.unit.function(name)
        definition = info.definition
        if len(args) != len(definition.params):
            raise RuntimeFault(f"function '{name}' expects {len(definition.params)} argument(s)")
        env = {p.name: self.normalize(copy_value(a), p.type) for p, a in zip(definition.params, args)}
        sampled = name in self.monitored
        if sampled:
            self._sample(info.points[ProgramPoint.entry(name)], env)
        result = None
        try:
            self._block(definition.body, env, name)
        except _Return as ret:
            result = ret.value
        if sampled:
            exit_env = dict(env)
            if result is not None:
                exit_env[RETURN_VAR] = result
            self._sample(info.points[ProgramPoint.exit(name)], exit_env)
        return result

    def _tick(self, function):
        self.steps += 1
        if self.steps > self.step_budget:
            raise RuntimeFault(f"step budget of {self.step_budget} statements exceeded in '{function}'")

    def _block(self, stmts, env, function):
        for stmt in stmts:
            self._statement(stmt, env, function)

    def _statement(self, stmt, env, function):
        if isinstance(stmt, VarDecl):
            self._tick(function)
            env[stmt.name] = copy_value(self.eval(stmt.init, env)) if stmt.init is not None else self.zero(stmt.type)
        elif isinstance(stmt, Assign):
            self._tick(function)
            value = copy_value(self.eval(stmt.value, env))
            target = stmt.target
            if isinstance(target, Var):
                env[target.name] = value
            elif isinstance(target, FieldAccess):
                env[target.base.name][target.field] = value
            else:
                array = env[target.base.name]
                env[target.base.name][self._checked_index(array, self.eval(target.index, env))] = value
        elif isinstance(stmt, If):
            self._tick(function)
            if self.eval(stmt.cond, env):
                self._block(stmt.then, env, function)
            else:
                self._block(stmt.orelse, env, function)
        elif isinstance(stmt, While):
            schema = None
            if function in self.monitored:
                schema = self.unit.function(function).points[ProgramPoint.loop(function, stmt.ordinal)]
            while True:
                if schema is not None:
                    self._sample(schema, env)
                self._tick(function)
                if not self.eval(stmt.cond, env):
                    break
                self._block(stmt.body, env, function)
        elif isinstance(stmt, Return):
            self._tick(function)
            value = copy_value(self.eval(stmt.value, env)) if stmt.value is not None else None
            raise _Return(value)
        elif isinstance(stmt, ExprStmt):
            self._tick(function)
            self.eval(stmt.call, env)
        elif isinstance(stmt, Assume):
            self._tick(function)
            if not self.eval(stmt.cond, env):
                raise AssumptionFailed(f"assumption at line {stmt.span.line} does not hold")
        elif isinstance(stmt, Assert):
            self._tick(function)
            if not self.eval(stmt.cond, env):
                raise AssertionViolation(stmt.label, stmt.span.line)
        else:
            raise TypeError(f"not a statement: {stmt!r}")

    def _checked_index(self, array, index):
        if not 0 <= index < len(array):
            raise RuntimeFault(f"array index {index} out of bounds for length {len(array)}")
        return index

    def eval(self, expr, env):
        if isinstance(expr, IntLit):
            return wrap(expr.value, self.width)
        if isinstance(expr, Var):
            return env[expr.name]
        if isinstance(expr, FieldAccess):
            return self.eval(expr.base, env)[expr.field]
        if isinstance(expr, Index):
            array = self.eval(expr.base, env)
            return array[self._checked_index(array, self.eval(expr.index, env))]
        if isinstance(expr, Unary):
            value = self.eval(expr.operand, env)
            return wrap(-value, self.width) if expr.op == "-" else int(value == 0)
        if isinstance(expr, Binary):
            left = self.eval(expr.left, env)
            if expr.op == "&&":
                return int(bool(left) and bool(self.eval(expr.right, env)))
            if expr.op == "||":
                return int(bool(left) or bool(self.eval(expr.right, env)))
            return binary_op(expr.op, left, self.eval(expr.right, env), self.width)
        if isinstance(expr, Call):
            args = [copy_value(self.eval(a, env)) for a in expr.args]
            return self.call(expr.name, args)
        raise TypeError(f"not an expression: {expr!r}")
