"""Template-based inference of likely properties from trace logs."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np

from ..changes.detector import AnalysisScope
from ..shared.logger import log
from ..tracer.trace_io import TraceLog
from .properties import (
    EqConst,
    LowerBound,
    NonZero,
    OffsetEq,
    OneOf,
    Property,
    RelVarVar,
    UpperBound,
)

MAX_ONE_OF = 3


def _wrap_array(values: np.ndarray, bit_width: int) -> np.ndarray:
    half = 1 << (bit_width - 1)
    return ((values + half) % (1 << bit_width)) - half


def infer_point(point, variables, matrix: np.ndarray, bit_width: int = 16) -> list[Property]:
    """All unsuppressed template instances holding on every row of `matrix` (samples x variables)."""
    formulas = []
    constant = {}
    for column, name in enumerate(variables):
        x = matrix[:, column]
        distinct = np.unique(x)
        if len(distinct) == 1:
            constant[name] = int(distinct[0])
            formulas.append(EqConst(name, int(distinct[0])))
            continue
        formulas.append(LowerBound(name, int(distinct[0])))
        formulas.append(UpperBound(name, int(distinct[-1])))
        if not np.any(x == 0):
            formulas.append(NonZero(name))
        if len(distinct) <= MAX_ONE_OF:
            formulas.append(OneOf(name, [int(d) for d in distinct]))
    for i, j in combinations(range(len(variables)), 2):
        v, w = variables[i], variables[j]
        x, y = matrix[:, i], matrix[:, j]
        equal = bool(np.all(x == y))
        if equal:
            formulas.append(RelVarVar(v, "==", w))
        if bool(np.all(x != y)):
            formulas.append(RelVarVar(v, "!=", w))
        if bool(np.all(x >= y)):
            formulas.append(RelVarVar(v, ">=", w))
        if bool(np.all(x <= y)):
            formulas.append(RelVarVar(v, "<=", w))
        if not equal:
            offsets = np.unique(_wrap_array(x - y, bit_width))
            if len(offsets) == 1:
                formulas.append(OffsetEq(v, w, int(offsets[0])))
    props = [Property(point, f) for f in formulas]
    return sorted(props, key=lambda p: p.sort_key())


def infer(
    logs,
    scope: AnalysisScope,
    min_support: int = 1,
    bit_width: int = 16,
    parallelism: int = 1,
) -> list[Property]:
    """Infer DYNAMIC properties at every monitored point with at least `min_support` samples."""
    if isinstance(logs, TraceLog):
        logs = [logs]
    schemas = {}
    rows = {}
    for trace in logs:
        for point, variables in trace.schemas:
            schemas.setdefault(point, variables)
        for sample in trace.samples:
            rows.setdefault(sample.point, []).append(sample.values)
    tasks = []
    for point in sorted(schemas, key=lambda p: p.sort_key()):
        if point.function not in scope.monitored:
            continue
        samples = rows.get(point, [])
        if len(samples) < max(min_support, 1):
            continue
        matrix = np.asarray(samples, dtype=np.int64).reshape(len(samples), len(schemas[point]))
        tasks.append((point, schemas[point], matrix))
    if parallelism > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(lambda t: infer_point(*t, bit_width=bit_width), tasks))
    else:
        results = [infer_point(*t, bit_width=bit_width) for t in tasks]
    props = [p for group in results for p in group]
    log(f"{len(props)} dynamic propert{'y' if len(props) == 1 else 'ies'} over {len(tasks)} point(s)", filter_tag="INFER")
    return props
