"""Hash-consed word-level terms.

Every term gets an id in creation order, so arguments always have smaller
ids than the terms using them and iterating by id is a topological walk.
Bit-vector terms are W-bit two's complement; Boolean terms are single bits.
"""

from __future__ import annotations

from ..tracer.interpreter import binary_op, wrap

BV = "bv"
BOOL = "bool"

_COMMUTATIVE = {"add", "mul", "eq", "and", "or"}
_BV_BINARY = {"add": "+", "sub": "-", "mul": "*", "sdiv": "/", "srem": "%"}


class Term:
    __slots__ = ("id", "op", "sort", "args", "value", "name")

    def __init__(self, id, op, sort, args=(), value=None, name=None):
        self.id = id
        self.op = op
        self.sort = sort
        self.args = args
        self.value = value
        self.name = name

    @property
    def is_const(self) -> bool:
        return self.op in ("const", "bconst")

    def __repr__(self):
        if self.op == "const":
            return f"#{self.id}:{self.value}"
        if self.op == "bconst":
            return f"#{self.id}:{bool(self.value)}"
        if self.op == "input":
            return f"#{self.id}:{self.name}"
        return f"#{self.id}:{self.op}({', '.join(f'#{a.id}' for a in self.args)})"


class TermManager:
    def __init__(self, bit_width: int = 16):
        self.width = bit_width
        self.terms: list[Term] = []
        self.inputs: list[Term] = []
        self._table = {}
        self.true = self._make("bconst", BOOL, (), 1)
        self.false = self._make("bconst", BOOL, (), 0)

    def _make(self, op, sort, args=(), value=None, name=None) -> Term:
        key = (op, tuple(a.id for a in args), value, name)
        term = self._table.get(key)
        if term is None:
            term = Term(len(self.terms), op, sort, tuple(args), value, name)
            self.terms.append(term)
            self._table[key] = term
        return term

    # --- leaves ----------------------------------------------------------

    def const(self, value: int) -> Term:
        return self._make("const", BV, (), wrap(int(value), self.width))

    def boolean(self, value: bool) -> Term:
        return self.true if value else self.false

    def input(self, name: str) -> Term:
        key = ("input", (), None, name)
        if key in self._table:
            raise ValueError(f"duplicate input {name!r}")
        term = self._make("input", BV, (), None, name)
        self.inputs.append(term)
        return term

    # --- bit-vector operators -------------------------------------------

    def _ordered(self, op, a, b):
        if op in _COMMUTATIVE and b.id < a.id:
            return b, a
        return a, b

    def binary(self, op: str, a: Term, b: Term) -> Term:
        if a.is_const and b.is_const:
            return self.const(binary_op(_BV_BINARY[op], a.value, b.value, self.width))
        a, b = self._ordered(op, a, b)
        zero = self.const(0)
        if op == "add":
            if a is zero:
                return b
            if b is zero:
                return a
        elif op == "sub":
            if b is zero:
                return a
            if a is b:
                return zero
        elif op == "mul":
            if zero in (a, b):
                return zero
            one = self.const(1)
            if a is one:
                return b
            if b is one:
                return a
        elif op == "sdiv":
            if b is zero:
                return zero
            if b is self.const(1):
                return a
        elif op == "srem":
            if b is zero:
                return a
            if b is self.const(1) or b is self.const(-1):
                return zero
        return self._make(op, BV, (a, b))

    def add(self, a, b):
        return self.binary("add", a, b)

    def sub(self, a, b):
        return self.binary("sub", a, b)

    def mul(self, a, b):
        return self.binary("mul", a, b)

    def sdiv(self, a, b):
        return self.binary("sdiv", a, b)

    def srem(self, a, b):
        return self.binary("srem", a, b)

    def neg(self, a):
        if a.is_const:
            return self.const(-a.value)
        if a.op == "neg":
            return a.args[0]
        return self._make("neg", BV, (a,))

    def ite(self, c: Term, a: Term, b: Term) -> Term:
        if c is self.true or a is b:
            return a
        if c is self.false:
            return b
        if a.sort == BOOL:
            if a is self.true and b is self.false:
                return c
            if a is self.false and b is self.true:
                return self.not_(c)
        if c.op == "not":
            return self.ite(c.args[0], b, a)
        return self._make("ite", a.sort, (c, a, b))

    # --- predicates ------------------------------------------------------

    def eq(self, a, b):
        if a is b:
            return self.true
        if a.is_const and b.is_const:
            return self.boolean(a.value == b.value)
        a, b = self._ordered("eq", a, b)
        return self._make("eq", BOOL, (a, b))

    def slt(self, a, b):
        if a is b:
            return self.false
        if a.is_const and b.is_const:
            return self.boolean(a.value < b.value)
        return self._make("slt", BOOL, (a, b))

    def sle(self, a, b):
        if a is b:
            return self.true
        if a.is_const and b.is_const:
            return self.boolean(a.value <= b.value)
        return self._make("sle", BOOL, (a, b))

    def not_(self, a):
        if a is self.true:
            return self.false
        if a is self.false:
            return self.true
        if a.op == "not":
            return a.args[0]
        return self._make("not", BOOL, (a,))

    def and_(self, a, b):
        if a is self.false or b is self.false:
            return self.false
        if a is self.true:
            return b
        if b is self.true or a is b:
            return a
        if (a.op == "not" and a.args[0] is b) or (b.op == "not" and b.args[0] is a):
            return self.false
        a, b = self._ordered("and", a, b)
        return self._make("and", BOOL, (a, b))

    def or_(self, a, b):
        if a is self.true or b is self.true:
            return self.true
        if a is self.false:
            return b
        if b is self.false or a is b:
            return a
        if (a.op == "not" and a.args[0] is b) or (b.op == "not" and b.args[0] is a):
            return self.true
        a, b = self._ordered("or", a, b)
        return self._make("or", BOOL, (a, b))

    def implies(self, a, b):
        return self.or_(self.not_(a), b)

    def conjoin(self, terms):
        result = self.true
        for term in terms:
            result = self.and_(result, term)
        return result

    def disjoin(self, terms):
        result = self.false
        for term in terms:
            result = self.or_(result, term)
        return result

    # --- C-style truth values -------------------------------------------

    def from_bool(self, c: Term) -> Term:
        """The int 0/1 a relational operator yields."""
        return self.ite(c, self.const(1), self.const(0))

    def truthy(self, a: Term) -> Term:
        """Boolean `a != 0`."""
        if a.op == "ite" and a.args[1] is self.const(1) and a.args[2] is self.const(0):
            return a.args[0]
        return self.not_(self.eq(a, self.const(0)))

    def cone(self, roots) -> list[Term]:
        """Terms reachable from `roots`, in id order."""
        seen = set()
        stack = list(roots)
        while stack:
            term = stack.pop()
            if term.id in seen:
                continue
            seen.add(term.id)
            stack.extend(term.args)
        return [self.terms[i] for i in sorted(seen)]
