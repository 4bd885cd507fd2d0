"""Bit-blasting of word-level terms to CNF.

Literals are non-zero ints in DIMACS convention. Variable 1 is the constant
TRUE (forced by a unit clause). Gates are folded when an input is constant
and structurally hashed otherwise; each new gate adds its Tseitin clauses.
Bit-vectors are lists of literals, least significant bit first.
"""

from __future__ import annotations

from .terms import BOOL, Term, TermManager

TRUE = 1
FALSE = -1


class BitBlaster:
    def __init__(self, manager: TermManager):
        self.manager = manager
        self.width = manager.width
        self.num_vars = 1
        self.clauses: list[list[int]] = [[TRUE]]
        self._gates = {}
        self._blasted = {}
        # input bits first: models are total over every input of the manager
        self.input_bits: dict[str, list[int]] = {}
        for term in manager.inputs:
            bits = [self.new_var() for _ in range(self.width)]
            self.input_bits[term.name] = bits
            self._blasted[term.id] = bits

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    # --- gates -----------------------------------------------------------

    def and_gate(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE or a == -b:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        key = ("and", min(a, b), max(a, b))
        out = self._gates.get(key)
        if out is None:
            out = self.new_var()
            self.clauses.extend(([-out, a], [-out, b], [out, -a, -b]))
            self._gates[key] = out
        return out

    def or_gate(self, a: int, b: int) -> int:
        return -self.and_gate(-a, -b)

    def xor_gate(self, a: int, b: int) -> int:
        if a == FALSE:
            return b
        if b == FALSE:
            return a
        if a == TRUE:
            return -b
        if b == TRUE:
            return -a
        if a == b:
            return FALSE
        if a == -b:
            return TRUE
        # normalise polarities so xor(a, b) and xor(-a, -b) share one gate
        flip = (a < 0) != (b < 0)
        a, b = abs(a), abs(b)
        key = ("xor", min(a, b), max(a, b))
        out = self._gates.get(key)
        if out is None:
            out = self.new_var()
            self.clauses.extend(([-out, a, b], [-out, -a, -b], [out, -a, b], [out, a, -b]))
            self._gates[key] = out
        return -out if flip else out

    def ite_gate(self, c: int, t: int, e: int) -> int:
        if c == TRUE or t == e:
            return t
        if c == FALSE:
            return e
        if t == TRUE:
            return self.or_gate(c, e)
        if t == FALSE:
            return self.and_gate(-c, e)
        if e == TRUE:
            return self.or_gate(-c, t)
        if e == FALSE:
            return self.and_gate(c, t)
        if c < 0:
            c, t, e = -c, e, t
        key = ("ite", c, t, e)
        out = self._gates.get(key)
        if out is None:
            out = self.new_var()
            self.clauses.extend(([-c, -t, out], [-c, t, -out], [c, -e, out], [c, e, -out]))
            self._gates[key] = out
        return out

    # --- arithmetic circuits ---------------------------------------------

    def const_bits(self, value: int, width=None) -> list[int]:
        width = width or self.width
        return [TRUE if (value >> i) & 1 else FALSE for i in range(width)]

    def full_adder(self, a, b, carry):
        partial = self.xor_gate(a, b)
        total = self.xor_gate(partial, carry)
        carry_out = self.or_gate(self.and_gate(a, b), self.and_gate(carry, partial))
        return total, carry_out

    def adder(self, xs, ys, carry=FALSE):
        """Ripple-carry sum; returns (bits, carry out)."""
        out = []
        for a, b in zip(xs, ys):
            bit, carry = self.full_adder(a, b, carry)
            out.append(bit)
        return out, carry

    def add(self, xs, ys):
        return self.adder(xs, ys)[0]

    def sub(self, xs, ys):
        return self.adder(xs, [-y for y in ys], TRUE)[0]

    def neg(self, xs):
        return self.adder([-x for x in xs], self.const_bits(0, len(xs)), TRUE)[0]

    def mul(self, xs, ys):
        """Shift-and-add multiplier, truncated to the operand width."""
        width = len(xs)
        result = self.const_bits(0, width)
        for i, y in enumerate(ys):
            partial = [FALSE] * i + [self.and_gate(x, y) for x in xs[: width - i]]
            result = self.add(result, partial)
        return result

    def ult(self, xs, ys) -> int:
        """Unsigned less-than, rippled from the least significant bit."""
        less = FALSE
        for a, b in zip(xs, ys):
            less = self.ite_gate(self.xor_gate(a, b), b, less)
        return less

    def slt(self, xs, ys) -> int:
        return self.ult(xs[:-1] + [-xs[-1]], ys[:-1] + [-ys[-1]])

    def sle(self, xs, ys) -> int:
        return -self.slt(ys, xs)

    def equal(self, xs, ys) -> int:
        result = TRUE
        for a, b in zip(xs, ys):
            result = self.and_gate(result, -self.xor_gate(a, b))
        return result

    def select(self, c, xs, ys):
        return [self.ite_gate(c, x, y) for x, y in zip(xs, ys)]

    def udivrem(self, xs, ys):
        """Restoring division of unsigned vectors; quotient and remainder."""
        width = len(xs)
        divisor = ys + [FALSE]
        remainder = self.const_bits(0, width + 1)
        quotient = [FALSE] * width
        for i in reversed(range(width)):
            remainder = [xs[i]] + remainder[:-1]
            fits = -self.ult(remainder, divisor)
            difference = self.sub(remainder, divisor)
            remainder = self.select(fits, difference, remainder)
            quotient[i] = fits
        return quotient, remainder[:width]

    def sdivrem(self, xs, ys):
        """C-style signed division and remainder; a zero divisor gives (0, xs)."""
        sign_x, sign_y = xs[-1], ys[-1]
        abs_x = self.select(sign_x, self.neg(xs), xs)
        abs_y = self.select(sign_y, self.neg(ys), ys)
        quotient, remainder = self.udivrem(abs_x, abs_y)
        quotient = self.select(self.xor_gate(sign_x, sign_y), self.neg(quotient), quotient)
        remainder = self.select(sign_x, self.neg(remainder), remainder)
        zero_divisor = self.equal(ys, self.const_bits(0, len(ys)))
        quotient = self.select(zero_divisor, self.const_bits(0, len(xs)), quotient)
        remainder = self.select(zero_divisor, xs, remainder)
        return quotient, remainder

    # --- terms -----------------------------------------------------------

    def blast(self, term: Term):
        """Literal (Boolean term) or literal list (bit-vector term) for `term`."""
        for sub in self.manager.cone([term]):
            if sub.id not in self._blasted:
                self._blasted[sub.id] = self._blast_one(sub)
        return self._blasted[term.id]

    def _blast_one(self, term: Term):
        op = term.op
        args = [self._blasted[a.id] for a in term.args]
        if op == "const":
            return self.const_bits(term.value)
        if op == "bconst":
            return TRUE if term.value else FALSE
        if op == "add":
            return self.add(*args)
        if op == "sub":
            return self.sub(*args)
        if op == "mul":
            return self.mul(*args)
        if op == "neg":
            return self.neg(args[0])
        if op == "sdiv":
            return self.sdivrem(*args)[0]
        if op == "srem":
            return self.sdivrem(*args)[1]
        if op == "eq":
            return self.equal(*args)
        if op == "slt":
            return self.slt(*args)
        if op == "sle":
            return self.sle(*args)
        if op == "not":
            return -args[0]
        if op == "and":
            return self.and_gate(*args)
        if op == "or":
            return self.or_gate(*args)
        if op == "ite":
            if term.sort == BOOL:
                return self.ite_gate(*args)
            return self.select(*args)
        raise ValueError(f"cannot bit-blast operator {op!r}")

    def assert_true(self, literal: int):
        self.clauses.append([literal])

    def decode(self, model) -> dict:
        """Signed input values from a model (sequence indexed by variable, or a dict)."""
        values = {}
        for name, bits in self.input_bits.items():
            raw = 0
            for i, literal in enumerate(bits):
                if model[literal]:
                    raw |= 1 << i
            if raw >= 1 << (self.width - 1):
                raw -= 1 << self.width
            values[name] = raw
        return values
