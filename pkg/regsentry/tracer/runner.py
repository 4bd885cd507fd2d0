"""Test manifests and suite execution."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..changes.detector import AnalysisScope
from ..minic.analyzer import AnalyzedUnit, analyze
from ..minic.nodes import Assert, Assume, walk_statements
from ..minic.parser import parse_file
from ..shared.errors import ConfigError, RuntimeFault, SemanticError
from ..shared.logger import log
from .interpreter import STEP_BUDGET, Interpreter
from .trace_io import TraceLog, merge_logs


class Suite(Enum):
    BASE = "BASE"
    UPGRADE = "UPGRADE"


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    name: str
    harness_path: str
    suite: Suite = Suite.BASE

    @property
    def function(self) -> str:
        return f"test_{self.name}"


def load_manifest(path, suite: Suite = Suite.BASE) -> list[TestCase]:
    """Read one harness path per line; blank lines and `#` comments are ignored."""
    manifest = Path(path)
    if not manifest.is_file():
        raise ConfigError(f"test manifest not found: {manifest}")
    tests = []
    seen = set()
    for line_no, raw in enumerate(manifest.read_text(encoding="utf-8").splitlines(), start=1):
        entry = raw.split("#", 1)[0].strip()
        if not entry:
            continue
        harness = Path(entry)
        if not harness.is_absolute():
            harness = manifest.parent / harness
        if not harness.is_file():
            raise ConfigError(f"{manifest}:{line_no}: harness file not found: {entry}")
        name = harness.stem
        if name in seen:
            raise ConfigError(f"{manifest}:{line_no}: duplicate test name '{name}'")
        seen.add(name)
        tests.append(TestCase(name, str(harness), suite))
    return tests


def load_harness(unit: AnalyzedUnit, test: TestCase) -> AnalyzedUnit:
    source = parse_file(test.harness_path, harness=True)
    for function in source.functions:
        for stmt in walk_statements(function.body):
            if isinstance(stmt, (Assume, Assert)):
                raise SemanticError(
                    f"{test.harness_path}: assume/assert are not allowed in test harnesses",
                    stmt.span.line,
                    stmt.span.column,
                )
    drivers = [f for f in source.functions if f.name.startswith("test_")]
    if len(drivers) != 1 or drivers[0].name != test.function or drivers[0].params:
        raise SemanticError(
            f"{test.harness_path}: expected exactly one zero-parameter function '{test.function}'"
        )
    return analyze(source, against=unit)


def run_test(
    unit: AnalyzedUnit,
    test: TestCase,
    scope: AnalysisScope,
    version: str = "BASE",
    bit_width: int = 16,
    step_budget: int = STEP_BUDGET,
) -> TraceLog:
    combined = load_harness(unit, test)
    monitored = scope.monitored & set(unit.program_functions())
    interpreter = Interpreter(
        combined, bit_width=bit_width, monitored=monitored, test_name=test.name, step_budget=step_budget
    )
    try:
        interpreter.call(test.function)
    except RuntimeFault as fault:
        raise RuntimeFault(f"test '{test.name}': {fault}") from fault
    schemas = tuple(
        (schema.point, schema.variables)
        for schema in unit.schemas()
        if schema.point.function in monitored
    )
    log(f"{test.name}: {len(interpreter.samples)} sample(s), {interpreter.steps} step(s)", filter_tag="TRACER")
    return TraceLog(version, tuple(interpreter.samples), (test.name,), schemas, bit_width)


def run_suite(
    unit: AnalyzedUnit,
    tests,
    scope: AnalysisScope,
    version: str = "BASE",
    bit_width: int = 16,
    parallelism: int = 1,
) -> TraceLog:
    """Run every test of a manifest and merge the logs in manifest order."""
    tests = list(tests)
    if parallelism > 1 and len(tests) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            logs = list(pool.map(lambda t: run_test(unit, t, scope, version, bit_width), tests))
    else:
        logs = [run_test(unit, t, scope, version, bit_width) for t in tests]
    merged = merge_logs(logs, version=version, bit_width=bit_width)
    log(f"{version}: {len(tests)} test(s), {len(merged.samples)} sample(s)", filter_tag="TRACER")
    return merged
