"""CDCL SAT solver.

Two watched literals per clause, first-UIP clause learning with
non-chronological backjumping, VSIDS-style variable activities kept in a
lazy heap, phase saving and Luby restarts. A conflict budget and a
wall-clock deadline bound every call.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional

RESTART_UNIT = 64
VAR_DECAY = 0.95
RESCALE_LIMIT = 1e100


class SatStatus(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"


@dataclass
class SolveResult:
    status: SatStatus
    # model[v] is the value of variable v (index 0 unused) when SAT
    model: Optional[list] = None
    conflicts: int = 0
    decisions: int = 0


def luby(i: int) -> int:
    """i-th element (from 1) of the Luby restart sequence 1 1 2 1 1 2 4 ..."""
    while True:
        k = 1
        while (1 << k) - 1 < i:
            k += 1
        if (1 << k) - 1 == i:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1


def normalize_clauses(clauses):
    """Drop duplicate literals and tautologies; returns None if an empty clause is present."""
    result = []
    for clause in clauses:
        lits = list(dict.fromkeys(int(l) for l in clause))
        if not lits:
            return None
        present = set(lits)
        if any(-l in present for l in lits):
            continue
        result.append(lits)
    return result


class Solver:
    def __init__(self, num_vars: int, clauses, max_conflicts: int = 20000, timeout: Optional[float] = None):
        self.num_vars = num_vars
        self.max_conflicts = max_conflicts
        self.deadline = time.monotonic() + timeout if timeout else None
        self.assigns = [0] * (num_vars + 1)
        self.level = [0] * (num_vars + 1)
        self.reason: list[Optional[int]] = [None] * (num_vars + 1)
        self.polarity = [False] * (num_vars + 1)
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.watches = [[] for _ in range(2 * (num_vars + 1))]
        self.clauses: list[list[int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap = [(0.0, v) for v in range(1, num_vars + 1)]
        heapq.heapify(self.heap)
        self.conflicts = 0
        self.decisions = 0
        self.ok = True
        self._load(clauses)

    # --- literals ----------------------------------------------------------

    @staticmethod
    def _slot(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _value(self, lit: int) -> int:
        value = self.assigns[abs(lit)]
        return value if lit > 0 else -value

    def _decision_level(self) -> int:
        return len(self.trail_lim)

    def _enqueue(self, lit: int, reason: Optional[int]) -> bool:
        value = self._value(lit)
        if value != 0:
            return value > 0
        var = abs(lit)
        self.assigns[var] = 1 if lit > 0 else -1
        self.level[var] = self._decision_level()
        self.reason[var] = reason
        self.trail.append(lit)
        return True

    # --- clause database ---------------------------------------------------

    def _load(self, clauses):
        normalized = normalize_clauses(clauses)
        if normalized is None:
            self.ok = False
            return
        for lits in normalized:
            if any(abs(l) > self.num_vars for l in lits):
                raise ValueError("literal outside the declared variable range")
            if len(lits) == 1:
                if not self._enqueue(lits[0], None):
                    self.ok = False
                    return
            else:
                self._attach(lits)

    def _attach(self, lits) -> int:
        index = len(self.clauses)
        self.clauses.append(lits)
        self.watches[self._slot(lits[0])].append(index)
        self.watches[self._slot(lits[1])].append(index)
        return index

    # --- propagation -------------------------------------------------------

    def _propagate(self) -> Optional[int]:
        """Unit propagation; returns the index of a conflicting clause or None."""
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            slot = self._slot(false_lit)
            watching = self.watches[slot]
            kept = []
            position = 0
            while position < len(watching):
                index = watching[position]
                position += 1
                clause = self.clauses[index]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._value(first) > 0:
                    kept.append(index)
                    continue
                for k in range(2, len(clause)):
                    if self._value(clause[k]) >= 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[self._slot(clause[1])].append(index)
                        break
                else:
                    kept.append(index)
                    if self._value(first) < 0:
                        kept.extend(watching[position:])
                        self.watches[slot] = kept
                        self.qhead = len(self.trail)
                        return index
                    self._enqueue(first, index)
            self.watches[slot] = kept
        return None

    # --- conflict analysis -------------------------------------------------

    def _bump(self, var: int):
        self.activity[var] += self.var_inc
        if self.activity[var] > RESCALE_LIMIT:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[v], v) for v in range(1, self.num_vars + 1) if self.assigns[v] == 0]
            heapq.heapify(self.heap)
        elif self.assigns[var] == 0:
            heapq.heappush(self.heap, (-self.activity[var], var))

    def _analyze(self, conflict: int):
        """First-UIP learning; returns (learnt clause, backjump level)."""
        learnt = [0]
        seen = set()
        pending = 0
        index = len(self.trail) - 1
        clause = self.clauses[conflict]
        implied = None
        current = self._decision_level()
        while True:
            for lit in clause if implied is None else clause[1:]:
                var = abs(lit)
                if var not in seen and self.level[var] > 0:
                    seen.add(var)
                    self._bump(var)
                    if self.level[var] >= current:
                        pending += 1
                    else:
                        learnt.append(lit)
            while abs(self.trail[index]) not in seen:
                index -= 1
            implied = self.trail[index]
            index -= 1
            seen.discard(abs(implied))
            pending -= 1
            if pending == 0:
                break
            clause = self.clauses[self.reason[abs(implied)]]
        learnt[0] = -implied
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backtrack(self, level: int):
        if self._decision_level() <= level:
            return
        for position in range(len(self.trail) - 1, self.trail_lim[level] - 1, -1):
            var = abs(self.trail[position])
            self.polarity[var] = self.assigns[var] > 0
            self.assigns[var] = 0
            self.reason[var] = None
            heapq.heappush(self.heap, (-self.activity[var], var))
        del self.trail[self.trail_lim[level]:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _pick_branch(self) -> Optional[int]:
        while self.heap:
            _, var = heapq.heappop(self.heap)
            if self.assigns[var] == 0:
                return var if self.polarity[var] else -var
        return None

    # --- search ------------------------------------------------------------

    def _out_of_budget(self) -> bool:
        if self.conflicts >= self.max_conflicts:
            return True
        return self.deadline is not None and time.monotonic() > self.deadline

    def solve(self) -> SolveResult:
        if not self.ok or self._propagate() is not None:
            return SolveResult(SatStatus.UNSAT, conflicts=self.conflicts)
        restarts = 1
        restart_limit = luby(restarts) * RESTART_UNIT
        conflicts_since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                conflicts_since_restart += 1
                if self._decision_level() == 0:
                    return SolveResult(SatStatus.UNSAT, conflicts=self.conflicts, decisions=self.decisions)
                learnt, level = self._analyze(conflict)
                self._backtrack(level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self.var_inc /= VAR_DECAY
                if self._out_of_budget():
                    return SolveResult(SatStatus.BUDGET_EXCEEDED, conflicts=self.conflicts, decisions=self.decisions)
                continue
            if conflicts_since_restart >= restart_limit:
                restarts += 1
                restart_limit = luby(restarts) * RESTART_UNIT
                conflicts_since_restart = 0
                self._backtrack(0)
                continue
            lit = self._pick_branch()
            if lit is None:
                model = [False] + [self.assigns[v] > 0 for v in range(1, self.num_vars + 1)]
                return SolveResult(SatStatus.SAT, model, self.conflicts, self.decisions)
            self.decisions += 1
            if self.decisions % 1024 == 0 and self._out_of_budget():
                return SolveResult(SatStatus.BUDGET_EXCEEDED, conflicts=self.conflicts, decisions=self.decisions)
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def solve_cnf(num_vars: int, clauses, max_conflicts: int = 20000, timeout: Optional[float] = None) -> SolveResult:
    return Solver(num_vars, clauses, max_conflicts, timeout).solve()
