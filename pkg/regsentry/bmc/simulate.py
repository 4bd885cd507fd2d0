"""Vectorised evaluation of term DAGs.

The same evaluator drives the random simulation pre-pass (many input rows
at once) and model decoding (a single row).
"""

from __future__ import annotations

import numpy as np

from .terms import TermManager


def _wrap(values, width):
    half = 1 << (width - 1)
    return ((values + half) % (1 << width)) - half


def evaluate(manager: TermManager, inputs: dict, rows: int, roots=None) -> dict:
    """Evaluate terms on `rows` input rows.

    `inputs` maps input names to int arrays of length `rows`; missing inputs
    default to zero. Returns a dict from term id to value array (int64 for
    bit-vectors, bool for Booleans). With `roots`, only their cone is evaluated.
    """
    width = manager.width
    terms = manager.cone(roots) if roots is not None else manager.terms
    values = {}
    for term in terms:
        op = term.op
        args = [values[a.id] for a in term.args]
        if op == "const":
            result = np.full(rows, term.value, dtype=np.int64)
        elif op == "bconst":
            result = np.full(rows, bool(term.value), dtype=bool)
        elif op == "input":
            given = inputs.get(term.name)
            result = np.zeros(rows, dtype=np.int64) if given is None else _wrap(np.asarray(given, dtype=np.int64), width)
        elif op == "add":
            result = _wrap(args[0] + args[1], width)
        elif op == "sub":
            result = _wrap(args[0] - args[1], width)
        elif op == "mul":
            result = _wrap(args[0] * args[1], width)
        elif op == "neg":
            result = _wrap(-args[0], width)
        elif op in ("sdiv", "srem"):
            a, b = args
            safe = np.where(b == 0, 1, b)
            if op == "sdiv":
                quotient = np.abs(a) // np.abs(safe)
                quotient = np.where((a < 0) != (safe < 0), -quotient, quotient)
                result = np.where(b == 0, 0, _wrap(quotient, width))
            else:
                remainder = np.abs(a) % np.abs(safe)
                remainder = np.where(a < 0, -remainder, remainder)
                result = np.where(b == 0, a, _wrap(remainder, width))
        elif op == "eq":
            result = args[0] == args[1]
        elif op == "slt":
            result = args[0] < args[1]
        elif op == "sle":
            result = args[0] <= args[1]
        elif op == "not":
            result = ~args[0]
        elif op == "and":
            result = args[0] & args[1]
        elif op == "or":
            result = args[0] | args[1]
        elif op == "ite":
            result = np.where(args[0], args[1], args[2])
        else:
            raise ValueError(f"unknown term operator {op!r}")
        values[term.id] = result
    return values


def random_inputs(manager: TermManager, rows: int, seed: int = 0) -> dict:
    """Deterministic mix of small, boundary and uniformly drawn W-bit values per input."""
    rng = np.random.default_rng(seed)
    lo = -(1 << (manager.width - 1))
    hi = (1 << (manager.width - 1)) - 1
    boundary = np.array([lo, lo + 1, -2, -1, 0, 1, 2, hi - 1, hi], dtype=np.int64)
    inputs = {}
    for term in manager.inputs:
        small = rng.integers(-4, 5, size=rows)
        uniform = rng.integers(lo, hi + 1, size=rows)
        edges = rng.choice(boundary, size=rows)
        which = rng.integers(0, 3, size=rows)
        inputs[term.name] = np.choose(which, [small, uniform, edges]).astype(np.int64)
    return inputs


def find_witnesses(manager: TermManager, queries: dict, rows: int, seed: int = 0) -> dict:
    """Map query key -> input assignment (name -> int) for every query some random row satisfies."""
    if rows <= 0 or not queries:
        return {}
    inputs = random_inputs(manager, rows, seed)
    values = evaluate(manager, inputs, rows, roots=list(queries.values()))
    witnesses = {}
    for key, term in queries.items():
        hits = np.flatnonzero(values[term.id])
        if hits.size:
            row = int(hits[0])
            witnesses[key] = {name: int(column[row]) for name, column in inputs.items()}
    return witnesses


def evaluate_single(manager: TermManager, assignment: dict, roots=None) -> dict:
    """Evaluate under one concrete input assignment; returns term id -> Python int/bool."""
    values = evaluate(manager, {k: np.array([v]) for k, v in assignment.items()}, 1, roots)
    return {tid: (bool(v[0]) if v.dtype == bool else int(v[0])) for tid, v in values.items()}
