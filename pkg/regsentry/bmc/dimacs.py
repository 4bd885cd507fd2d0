"""DIMACS CNF emission and parsing."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class CNF:
    num_vars: int
    clauses: list[list[int]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add_clause(self, clause) -> None:
        lits = [int(l) for l in clause if int(l) != 0]
        self.clauses.append(lits)
        if lits:
            self.num_vars = max(self.num_vars, *(abs(l) for l in lits))

    def to_dimacs(self) -> str:
        lines = [f"c {comment}" for comment in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in self.clauses)
        return "\n".join(lines) + "\n"

    def input_map(self) -> dict:
        """`c input <name> <bit> <var>` comments as {name: {bit: var}}."""
        mapping = {}
        for comment in self.comments:
            parts = comment.split()
            if len(parts) == 4 and parts[0] == "input":
                mapping.setdefault(parts[1], {})[int(parts[2])] = int(parts[3])
        return mapping


def from_blaster(blaster, roots=(), title=None) -> CNF:
    """CNF of a bit-blaster's clauses plus unit clauses asserting `roots`."""
    comments = [title] if title else []
    for name, bits in blaster.input_bits.items():
        comments.extend(f"input {name} {i} {var}" for i, var in enumerate(bits))
    cnf = CNF(blaster.num_vars, [list(c) for c in blaster.clauses], comments)
    for root in roots:
        cnf.add_clause([root])
    return cnf


def parse_dimacs(text: str) -> CNF:
    num_vars = 0
    clauses = []
    comments = []
    pending = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"malformed problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(pending)
                pending = []
            else:
                pending.append(lit)
                num_vars = max(num_vars, abs(lit))
    if pending:
        clauses.append(pending)
    return CNF(num_vars, clauses, comments)


def write_dimacs(cnf: CNF, path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(cnf.to_dimacs(), encoding="utf-8")
    return target


def read_dimacs(path) -> CNF:
    return parse_dimacs(Path(path).read_text(encoding="utf-8"))
