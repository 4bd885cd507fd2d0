"""Tests for the CDCL solver and the DIMACS format."""
import itertools
import random

import numpy as np
import pytest

from regsentry.bmc import CNF, SatStatus, parse_dimacs, read_dimacs, solve_cnf, write_dimacs
from regsentry.bmc.sat import luby, normalize_clauses


def random_cnf(rng, num_vars, num_clauses, width=3):
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.sample(range(1, num_vars + 1), min(width, num_vars))
        clauses.append([v if rng.random() < 0.5 else -v for v in chosen])
    return clauses


def satisfiable_by_enumeration(num_vars, clauses) -> bool:
    rows = np.arange(1 << num_vars, dtype=np.int64)
    bits = ((rows[:, None] >> np.arange(num_vars)) & 1).astype(bool)
    ok = np.ones(len(rows), dtype=bool)
    for clause in clauses:
        hit = np.zeros(len(rows), dtype=bool)
        for lit in clause:
            column = bits[:, abs(lit) - 1]
            hit |= column if lit > 0 else ~column
        ok &= hit
    return bool(ok.any())


def satisfies(model, clauses) -> bool:
    return all(any(model[abs(l)] == (l > 0) for l in clause) for clause in clauses)


def pigeonhole(holes):
    """holes + 1 pigeons into `holes` holes: unsatisfiable."""
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    clauses = [[var(p, h) for h in range(holes)] for p in range(pigeons)]
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            clauses.append([-var(p, h), -var(q, h)])
    return pigeons * holes, clauses


def test_luby_sequence():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_normalize_clauses():
    assert normalize_clauses([[1, 1, -2], [3, -3]]) == [[1, -2]]
    assert normalize_clauses([[1], []]) is None


def test_trivial_instances():
    assert solve_cnf(0, []).status is SatStatus.SAT
    assert solve_cnf(1, [[1], [-1]]).status is SatStatus.UNSAT
    assert solve_cnf(2, [[1, 2], []]).status is SatStatus.UNSAT
    result = solve_cnf(2, [[1], [-1, 2]])
    assert result.status is SatStatus.SAT
    assert result.model[1] and result.model[2]


def test_literal_out_of_range():
    with pytest.raises(ValueError):
        solve_cnf(2, [[1, 3]])


def test_pigeonhole_is_unsat():
    num_vars, clauses = pigeonhole(4)
    result = solve_cnf(num_vars, clauses)
    assert result.status is SatStatus.UNSAT
    assert result.conflicts > 0


def test_conflict_budget():
    num_vars, clauses = pigeonhole(6)
    result = solve_cnf(num_vars, clauses, max_conflicts=1)
    assert result.status is SatStatus.BUDGET_EXCEEDED


@pytest.mark.timeout(60)
def test_agrees_with_truth_tables():
    """200 random 3-CNFs around the phase transition, up to 20 variables."""
    rng = random.Random(2024)
    disagreements = []
    for index in range(200):
        num_vars = rng.randint(18, 20) if index % 20 == 0 else rng.randint(3, 14)
        num_clauses = max(1, int(num_vars * rng.uniform(3.6, 4.8)))
        clauses = random_cnf(rng, num_vars, num_clauses)
        expected = satisfiable_by_enumeration(num_vars, clauses)
        result = solve_cnf(num_vars, clauses)
        assert result.status is not SatStatus.BUDGET_EXCEEDED
        if (result.status is SatStatus.SAT) != expected:
            disagreements.append(index)
        if result.status is SatStatus.SAT:
            assert satisfies(result.model, clauses)
    assert disagreements == []


def test_dimacs_text(tmp_path):
    cnf = CNF(3, [[1, -2], [2, 3]], ["example", "input x 0 2"])
    text = cnf.to_dimacs()
    assert text.splitlines()[:3] == ["c example", "c input x 0 2", "p cnf 3 2"]
    path = write_dimacs(cnf, tmp_path / "q.cnf")
    parsed = read_dimacs(path)
    assert parsed.clauses == cnf.clauses
    assert parsed.num_vars == 3
    assert parsed.input_map() == {"x": {0: 2}}


def test_parse_dimacs_multiline_clause():
    cnf = parse_dimacs("p cnf 4 2\n1 2\n-3 0 4\n0\n")
    assert cnf.clauses == [[1, 2, -3], [4]]


def test_parse_dimacs_bad_problem_line():
    with pytest.raises(ValueError):
        parse_dimacs("p dnf 3 1\n1 0\n")
