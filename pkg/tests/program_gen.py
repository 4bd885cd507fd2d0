"""Random MiniC programs for differential and oracle tests.

Every generated program is well formed: functions only call functions
defined before them, every loop is driven by a counter that never exceeds
`max_trips`, and every function ends in a return.

With `arrays` each function works on a zero-filled local array, and some
of its indexes may fall out of bounds. With `records` each function works
on a local `Pair` record. With `early_returns` blocks may return from
inside branches and loop bodies.
"""

import random

BINARY_OPS = ("+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||")
LINEAR_OPS = tuple(op for op in BINARY_OPS if op not in ("*", "/", "%"))

ARRAY_LENGTH = 3
RECORD_DECL = "record Pair { int lo; int hi; }"
RECORD_FIELDS = ("lo", "hi")


class ProgramGenerator:
    def __init__(
        self,
        seed,
        functions=3,
        params=1,
        max_trips=3,
        statements=4,
        allow_loops=True,
        operators=BINARY_OPS,
        arrays=False,
        records=False,
        early_returns=False,
    ):
        self.rng = random.Random(seed)
        self.functions = functions
        self.params = params
        self.max_trips = max_trips
        self.statements = statements
        self.allow_loops = allow_loops
        self.operators = operators
        self.arrays = arrays
        self.records = records
        self.early_returns = early_returns
        self._defined = []
        self._array = None
        self._record = None

    # --- expressions -----------------------------------------------------

    def index(self, names):
        rng = self.rng
        roll = rng.random()
        if roll < 0.5 or not names:
            return str(rng.randrange(ARRAY_LENGTH))
        if roll < 0.85:
            return f"({rng.choice(names)} > {rng.randint(-4, 0)}) + ({rng.choice(names)} > {rng.randint(1, 5)})"
        # may fall outside the array
        return rng.choice(names)

    def cell(self, names):
        if self._array and (not self._record or self.rng.random() < 0.5):
            return f"{self._array}[{self.index(names)}]"
        return f"{self._record}.{self.rng.choice(RECORD_FIELDS)}"

    def leaf(self, names):
        rng = self.rng
        if (self._array or self._record) and rng.random() < 0.25:
            return self.cell(names)
        if names and rng.random() < 0.7:
            return rng.choice(names)
        return str(rng.randint(-6, 6))

    def expression(self, names, depth=0, calls=True):
        rng = self.rng
        roll = rng.random()
        if depth >= 2 or roll < 0.3:
            return self.leaf(names)
        if roll < 0.4:
            op = rng.choice(("-", "!"))
            return f"{op}({self.expression(names, depth + 1, calls)})"
        if calls and self._defined and roll < 0.5:
            callee, arity = rng.choice(self._defined)
            args = ", ".join(self.expression(names, depth + 1, calls=False) for _ in range(arity))
            return f"{callee}({args})"
        op = rng.choice(self.operators)
        left = self.expression(names, depth + 1, calls)
        right = self.expression(names, depth + 1, calls)
        return f"({left} {op} {right})"

    # --- statements ------------------------------------------------------

    def block(self, names, assignable, depth, in_loop, counter):
        lines = []
        for _ in range(self.rng.randint(1, self.statements)):
            roll = self.rng.random()
            indent = "    " * (depth + 1)
            if self.early_returns and depth > 0 and self.rng.random() < 0.15:
                cond = self.expression(names, calls=False)
                lines.append(f"{indent}if ({cond}) {{")
                lines.append(f"{indent}    return {self.expression(names, calls=False)};")
                lines.append(f"{indent}}}")
            elif (self._array or self._record) and self.rng.random() < 0.2:
                lines.append(f"{indent}{self.cell(names)} = {self.expression(names, calls=not in_loop)};")
            elif roll < 0.3:
                name = f"v{next(counter)}"
                lines.append(f"{indent}int {name} = {self.expression(names, calls=not in_loop)};")
                names.append(name)
                assignable.append(name)
            elif roll < 0.6 or depth >= 2:
                if not assignable:
                    continue
                target = self.rng.choice(assignable)
                lines.append(f"{indent}{target} = {self.expression(names, calls=not in_loop)};")
            elif roll < 0.8 or in_loop or not self.allow_loops:
                cond = self.expression(names, calls=False)
                lines.append(f"{indent}if ({cond}) {{")
                lines += self.block(list(names), list(assignable), depth + 1, in_loop, counter)
                lines.append(f"{indent}}} else {{")
                lines += self.block(list(names), list(assignable), depth + 1, in_loop, counter)
                lines.append(f"{indent}}}")
            else:
                k = f"k{next(counter)}"
                trips = self.rng.randint(1, self.max_trips)
                cond = self.expression(names, calls=False)
                lines.append(f"{indent}int {k} = 0;")
                lines.append(f"{indent}while ({k} < {trips} && {cond}) {{")
                lines += self.block(names + [k], list(assignable), depth + 1, True, counter)
                lines.append(f"{indent}    {k} = {k} + 1;")
                lines.append(f"{indent}}}")
                names.append(k)
        return lines

    def function(self, index):
        params = [f"p{index}_{i}" for i in range(self.params)]
        counter = iter(range(1000))
        name = f"f{index}"
        lines = [f"int {name}({', '.join('int ' + p for p in params)}) {{"]
        self._array = f"a{index}" if self.arrays else None
        self._record = f"r{index}" if self.records else None
        if self._array:
            lines.append(f"    int {self._array}[{ARRAY_LENGTH}];")
        if self._record:
            lines.append(f"    Pair {self._record};")
        names = list(params)
        lines += self.block(names, list(params), 0, False, counter)
        lines.append(f"    return {self.expression(names, calls=False)};")
        lines.append("}")
        self._defined.append((name, len(params)))
        return "\n".join(lines)

    def program(self) -> str:
        self._defined = []
        functions = [self.function(i) for i in range(self.functions)]
        if self.records:
            functions.insert(0, RECORD_DECL)
        return "\n\n".join(functions) + "\n"

    @property
    def entry(self) -> str:
        return f"f{self.functions - 1}"


def random_program(seed, **kwargs):
    """Return (source text, entry function name)."""
    generator = ProgramGenerator(seed, **kwargs)
    return generator.program(), generator.entry
