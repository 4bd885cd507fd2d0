"""Tests for word-level terms, their simulation and their bit-blasted circuits."""
import itertools

import numpy as np
import pytest

from regsentry.bmc import SatStatus, solve_cnf
from regsentry.bmc.bitblast import BitBlaster
from regsentry.bmc.dimacs import from_blaster
from regsentry.bmc.simulate import evaluate, evaluate_single, find_witnesses
from regsentry.bmc.terms import TermManager
from regsentry.tracer.interpreter import binary_op

OPERATORS = {
    "+": lambda m, x, y: m.add(x, y),
    "-": lambda m, x, y: m.sub(x, y),
    "*": lambda m, x, y: m.mul(x, y),
    "/": lambda m, x, y: m.sdiv(x, y),
    "%": lambda m, x, y: m.srem(x, y),
    "<": lambda m, x, y: m.from_bool(m.slt(x, y)),
    "<=": lambda m, x, y: m.from_bool(m.sle(x, y)),
    "==": lambda m, x, y: m.from_bool(m.eq(x, y)),
}


def fix_bits(bits, value):
    return [[bit] if (value >> i) & 1 else [-bit] for i, bit in enumerate(bits)]


def test_hash_consing_and_folding():
    m = TermManager(8)
    x, y = m.input("x"), m.input("y")
    assert m.add(x, y) is m.add(y, x)
    assert m.sub(x, y) is not m.sub(y, x)
    assert m.sub(x, x) is m.const(0)
    assert m.mul(x, m.const(1)) is x
    assert m.add(m.const(100), m.const(100)) is m.const(-56)
    assert m.sdiv(x, m.const(0)) is m.const(0)
    assert m.srem(x, m.const(0)) is x
    assert m.neg(m.neg(x)) is x
    b = m.slt(x, y)
    assert m.not_(m.not_(b)) is b
    assert m.and_(b, m.not_(b)) is m.false
    assert m.truthy(m.from_bool(b)) is b


def test_duplicate_input_rejected():
    m = TermManager(8)
    m.input("x")
    with pytest.raises(ValueError):
        m.input("x")


def test_cone_is_topological():
    m = TermManager(8)
    x, y = m.input("x"), m.input("y")
    root = m.mul(m.add(x, y), m.sub(x, y))
    ids = [t.id for t in m.cone([root])]
    assert ids == sorted(ids)
    assert ids[-1] == root.id


@pytest.mark.parametrize("op", sorted(OPERATORS))
def test_simulation_matches_interpreter(op):
    """Every 8-bit operand pair evaluates the same as the interpreter."""
    m = TermManager(8)
    x, y = m.input("x"), m.input("y")
    term = OPERATORS[op](m, x, y)
    a, b = np.meshgrid(np.arange(-128, 128), np.arange(-128, 128), indexing="ij")
    a, b = a.ravel(), b.ravel()
    values = evaluate(m, {"x": a, "y": b}, a.size, roots=[term])[term.id]
    expected = np.array([binary_op(op, int(p), int(q), 8) for p, q in zip(a, b)])
    assert np.array_equal(values, expected)


@pytest.mark.parametrize("op", sorted(OPERATORS))
def test_circuits_match_interpreter(op):
    """Every 4-bit operand pair: the circuit forces the interpreter's result."""
    m = TermManager(4)
    x, y, z = m.input("x"), m.input("y"), m.input("z")
    root = m.eq(OPERATORS[op](m, x, y), z)
    blaster = BitBlaster(m)
    blaster.assert_true(blaster.blast(root))
    for a, b in itertools.product(range(-8, 8), repeat=2):
        units = fix_bits(blaster.input_bits["x"], a & 0xF) + fix_bits(blaster.input_bits["y"], b & 0xF)
        result = solve_cnf(blaster.num_vars, blaster.clauses + units)
        assert result.status is SatStatus.SAT
        assert blaster.decode(result.model)["z"] == binary_op(op, a, b, 4), (a, b)


def test_overflow_only_at_maximum():
    """x + 1 < x holds only for the largest value."""
    m = TermManager(8)
    x = m.input("x")
    blaster = BitBlaster(m)
    wraps = blaster.blast(m.slt(m.add(x, m.const(1)), x))
    result = solve_cnf(blaster.num_vars, blaster.clauses + [[wraps]])
    assert result.status is SatStatus.SAT
    assert blaster.decode(result.model)["x"] == 127
    not_max = blaster.blast(m.not_(m.eq(x, m.const(127))))
    result = solve_cnf(blaster.num_vars, blaster.clauses + [[wraps], [not_max]])
    assert result.status is SatStatus.UNSAT


def test_cnf_lists_inputs():
    m = TermManager(4)
    m.input("x")
    blaster = BitBlaster(m)
    cnf = from_blaster(blaster, title="demo")
    assert cnf.comments[0] == "demo"
    assert cnf.input_map() == {"x": {i: i + 2 for i in range(4)}}
    assert [1] in cnf.clauses


def test_find_witnesses():
    m = TermManager(8)
    x = m.input("x")
    negative = m.slt(x, m.const(0))
    # squares modulo 256 are never 7 modulo 8
    impossible = m.eq(m.mul(x, x), m.const(-1))
    witnesses = find_witnesses(m, {"neg": negative, "never": impossible}, rows=64, seed=3)
    assert set(witnesses) == {"neg"}
    assert witnesses["neg"]["x"] < 0
    assert evaluate_single(m, witnesses["neg"], roots=[negative])[negative.id] is True
    assert find_witnesses(m, {"neg": negative}, rows=0) == {}
