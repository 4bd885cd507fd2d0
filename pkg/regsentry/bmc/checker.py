"""Verification conditions, verdicts and counterexamples.

One query per (property, entry): the disjunction of the failure conditions
of all instances of the property's assertion. A seeded random simulation
runs first; queries it cannot falsify are bit-blasted and handed to the SAT
solver. Every violation is decoded into a counterexample over the
uninstrumented source and replayed through the interpreter.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

from ..inference.properties import Property
from ..inference.serialization import format_property, parse_property
from ..shared.errors import (
    AssertionViolation,
    AssumptionFailed,
    RegSentryError,
    RuntimeFault,
)
from ..shared.logger import log
from ..tracer.interpreter import Interpreter
from .bitblast import BitBlaster
from .config import BmcConfig
from .dimacs import from_blaster, write_dimacs
from .encoder import AssertEvent, Encoding, encode
from .instrument import InstrumentedUnit
from .sat import SatStatus, solve_cnf
from .simulate import evaluate_single, find_witnesses
from .terms import Term


class VerdictKind(Enum):
    VALID = "VALID"
    VIOLATED = "VIOLATED"
    UNKNOWN = "UNKNOWN"


class UnknownReason(Enum):
    BUDGET = "budget"
    UNSUPPORTED = "unsupported-construct"
    UNREACHABLE = "unreachable"
    UNWINDING = "unwinding-bound"


@dataclass(frozen=True)
class CounterexampleStep:
    line: int
    text: str
    # ordered (name, value) pairs updated by the statement
    bindings: tuple = ()
    function: str = ""
    assertion: bool = False

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "text": self.text,
            "function": self.function,
            "bindings": {name: value for name, value in self.bindings},
            "assertion": self.assertion,
        }

    @classmethod
    def from_dict(cls, data) -> "CounterexampleStep":
        return cls(
            data["line"],
            data["text"],
            tuple(data.get("bindings", {}).items()),
            data.get("function", ""),
            data.get("assertion", False),
        )


@dataclass(frozen=True)
class Counterexample:
    entry: str
    # parameter -> int, {field: int} or [int, ...]
    inputs: dict
    steps: tuple
    violated: Property

    def format_trace(self) -> str:
        lines = [f"Counterexample for {self.violated.describe()} (entry {self.entry}):"]
        for name, value in self.inputs.items():
            lines.append(f"  input {name} = {value}")
        lines.append("")
        for step in self.steps:
            marker = "!!" if step.assertion else "  "
            updates = ", ".join(f"{name} = {value}" for name, value in step.bindings)
            lines.append(f"{marker} {step.line:>4} | {step.text}" + (f"    [{updates}]" if updates else ""))
        lines.append("")
        lines.append(f"Property violated: {self.violated.formula.text()}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "inputs": dict(self.inputs),
            "steps": [s.to_dict() for s in self.steps],
            "property": format_property(self.violated),
        }

    @classmethod
    def from_dict(cls, data) -> "Counterexample":
        return cls(
            data["entry"],
            dict(data["inputs"]),
            tuple(CounterexampleStep.from_dict(s) for s in data["steps"]),
            parse_property(data["property"]),
        )


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    counterexample: Optional[Counterexample] = None
    reason: Optional[UnknownReason] = None
    bounds: dict = field(default_factory=dict)

    @classmethod
    def valid(cls, bounds) -> "Verdict":
        return cls(VerdictKind.VALID, bounds=bounds)

    @classmethod
    def violated(cls, counterexample, bounds) -> "Verdict":
        return cls(VerdictKind.VIOLATED, counterexample, bounds=bounds)

    @classmethod
    def unknown(cls, reason, bounds) -> "Verdict":
        return cls(VerdictKind.UNKNOWN, reason=reason, bounds=bounds)

    def describe(self) -> str:
        if self.kind is VerdictKind.UNKNOWN:
            return f"UNKNOWN({self.reason.value})"
        return self.kind.value

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value, "bounds": dict(self.bounds)}
        if self.reason is not None:
            data["reason"] = self.reason.value
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample.to_dict()
        return data

    @classmethod
    def from_dict(cls, data) -> "Verdict":
        counterexample = data.get("counterexample")
        reason = data.get("reason")
        return cls(
            VerdictKind(data["kind"]),
            Counterexample.from_dict(counterexample) if counterexample else None,
            UnknownReason(reason) if reason else None,
            dict(data.get("bounds", {})),
        )


@dataclass
class VerificationCondition:
    prop: Property
    entry: str
    query: Term
    encoding: Encoding
    # failures that only occur after a call cut off by the inline depth
    truncated: Optional[Term] = None


@dataclass
class QueryOutcome:
    status: SatStatus
    # flattened input name -> value when SAT
    assignment: Optional[dict] = None
    conflicts: int = 0


def _conditions(iu: InstrumentedUnit, encoding: Encoding) -> list[VerificationCondition]:
    reached = []
    for label, prop in iu.properties.items():
        if encoding.asserts(label):
            reached.append(
                VerificationCondition(
                    prop, encoding.entry, encoding.query(label), encoding, encoding.truncated_query(label)
                )
            )
    return reached


def build_vc(iu: InstrumentedUnit, entry: str, cfg: BmcConfig) -> list[VerificationCondition]:
    """One condition per property with an assertion reachable from `entry`."""
    return _conditions(iu, encode(iu.unit, entry, cfg, iu.properties))


def solve(vc: VerificationCondition, cfg: BmcConfig, truncated: bool = False) -> QueryOutcome:
    manager = vc.encoding.manager
    query = vc.truncated if truncated else vc.query
    if query is None or query is manager.false:
        return QueryOutcome(SatStatus.UNSAT)
    blaster = BitBlaster(manager)
    blaster.assert_true(blaster.blast(query))
    if cfg.cnf_dir:
        suffix = "_truncated" if truncated else ""
        title = f"{vc.prop.label} {vc.prop.describe()} from {vc.entry}"
        write_dimacs(
            from_blaster(blaster, title=title), Path(cfg.cnf_dir) / f"{vc.entry}_{vc.prop.label}{suffix}.cnf"
        )
    result = solve_cnf(blaster.num_vars, blaster.clauses, cfg.max_conflicts, cfg.timeout)
    if result.status is SatStatus.SAT:
        return QueryOutcome(result.status, blaster.decode(result.model), result.conflicts)
    return QueryOutcome(result.status, conflicts=result.conflicts)


# --- counterexamples -------------------------------------------------------


def _structured_inputs(encoding: Encoding, values) -> dict:
    inputs = {}
    for name, terms in encoding.inputs.items():
        if isinstance(terms, dict):
            inputs[name] = {k: values[t.id] for k, t in terms.items()}
        elif isinstance(terms, list):
            inputs[name] = [values[t.id] for t in terms]
        else:
            inputs[name] = values[terms.id]
    return inputs


def decode_counterexample(iu: InstrumentedUnit, vc: VerificationCondition, assignment: dict) -> Counterexample:
    """Concrete trace of the first failing assertion instance under `assignment`."""
    encoding = vc.encoding
    values = evaluate_single(encoding.manager, assignment)
    steps = []
    for event in encoding.events:
        if not values[event.guard.id]:
            continue
        line = iu.original_line(event.path, event.line)
        text = iu.original.source_line(event.path, line)
        if isinstance(event, AssertEvent):
            if event.label != vc.prop.label:
                continue
            if values[event.assumptions.id] and not values[event.cond.id] and not values[event.truncated.id]:
                observed = tuple((name, values[t.id]) for name, t in event.observed.items())
                steps.append(CounterexampleStep(line, text, observed, event.function, assertion=True))
                break
            continue
        bindings = []
        for name, index, value in event.bindings:
            display = name if index is None else f"{name}[{values[index.id]}]"
            bindings.append((display, values[value.id]))
        steps.append(CounterexampleStep(line, text, tuple(bindings), event.function))
    return Counterexample(vc.entry, _structured_inputs(encoding, values), tuple(steps), vc.prop)


def replay(iu: InstrumentedUnit, counterexample: Counterexample, cfg: BmcConfig) -> bool:
    """Run the counterexample inputs on the original program and look for a falsifying sample."""
    prop = counterexample.violated
    function = prop.point.function
    interpreter = Interpreter(iu.original, cfg.bit_width, monitored={function}, test_name="replay")
    entry = iu.original.function(counterexample.entry).definition
    try:
        interpreter.call(counterexample.entry, [counterexample.inputs[p.name] for p in entry.params])
    except (RuntimeFault, AssertionViolation, AssumptionFailed):
        # a fault after the violating sample does not invalidate it
        pass
    for sample in interpreter.samples:
        if sample.point == prop.point and not prop.formula.evaluate(sample.bindings, cfg.bit_width):
            return True
    return False


# --- checking ------------------------------------------------------------------


def _violation(iu, vc, assignment, cfg, bounds) -> Verdict:
    counterexample = decode_counterexample(iu, vc, assignment)
    if not replay(iu, counterexample, cfg):
        raise RegSentryError(f"counterexample for {vc.prop.describe()} from {vc.entry} does not replay")
    return Verdict.violated(counterexample, bounds)


def _unwinding_insufficient(encoding: Encoding, cfg: BmcConfig) -> bool:
    manager = encoding.manager
    failure = encoding.unwinding_failure
    if failure is manager.false:
        return False
    if find_witnesses(manager, {"unwind": failure}, cfg.simulation_rounds, cfg.seed):
        return True
    blaster = BitBlaster(manager)
    blaster.assert_true(blaster.blast(failure))
    return solve_cnf(blaster.num_vars, blaster.clauses, cfg.max_conflicts, cfg.timeout).status is not SatStatus.UNSAT


def _truncated_functions(iu: InstrumentedUnit, encoding: Encoding) -> set:
    """Functions with assertion instances a truncated call may have hidden."""
    hidden = set()
    for name in encoding.truncated:
        hidden |= iu.unit.call_graph.reachable_from(name)
    return hidden


def check(iu: InstrumentedUnit, entry: str, cfg: BmcConfig) -> dict:
    """Verdict per property label for every property whose assertions `entry` reaches.

    Failures on paths through a call past the inline depth, and properties
    of the functions such calls skipped, get UNKNOWN(unsupported-construct).
    """
    bounds = cfg.bounds(entry)
    encoding = encode(iu.unit, entry, cfg, iu.properties)
    conditions = _conditions(iu, encoding)
    hidden = _truncated_functions(iu, encoding)
    if hidden:
        log(
            f"{entry}: calls to {', '.join(sorted(encoding.truncated))} exceed inline depth {cfg.inline_depth}",
            filter_tag="BMC",
            level=logging.WARNING,
        )
    witnesses = find_witnesses(
        encoding.manager, {vc.prop.label: vc.query for vc in conditions}, cfg.simulation_rounds, cfg.seed
    )

    def decide(vc):
        witness = witnesses.get(vc.prop.label)
        if witness is not None:
            return _violation(iu, vc, witness, cfg, bounds)
        outcome = solve(vc, cfg)
        if outcome.status is SatStatus.SAT:
            return _violation(iu, vc, outcome.assignment, cfg, bounds)
        if outcome.status is not SatStatus.UNSAT:
            return Verdict.unknown(UnknownReason.BUDGET, bounds)
        if vc.prop.point.function in hidden:
            return Verdict.unknown(UnknownReason.UNSUPPORTED, bounds)
        outcome = solve(vc, cfg, truncated=True)
        if outcome.status is SatStatus.UNSAT:
            return Verdict.valid(bounds)
        if outcome.status is SatStatus.SAT:
            return Verdict.unknown(UnknownReason.UNSUPPORTED, bounds)
        return Verdict.unknown(UnknownReason.BUDGET, bounds)

    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        verdicts = dict(zip((vc.prop.label for vc in conditions), pool.map(decide, conditions)))
    for label, prop in iu.properties.items():
        if label not in verdicts and prop.point.function in hidden:
            verdicts[label] = Verdict.unknown(UnknownReason.UNSUPPORTED, bounds)
    if conditions and cfg.unwinding_assertions and _unwinding_insufficient(encoding, cfg):
        for label, verdict in verdicts.items():
            if verdict.kind is not VerdictKind.VIOLATED:
                verdicts[label] = Verdict.unknown(UnknownReason.UNWINDING, bounds)
    counts = {kind: sum(v.kind is kind for v in verdicts.values()) for kind in VerdictKind}
    log(
        f"{entry}: {counts[VerdictKind.VALID]} valid, {counts[VerdictKind.VIOLATED]} violated, "
        f"{counts[VerdictKind.UNKNOWN]} unknown",
        filter_tag="BMC",
    )
    return verdicts


def _combine(verdicts, bounds) -> Verdict:
    if not verdicts:
        return Verdict.unknown(UnknownReason.UNREACHABLE, bounds)
    for verdict in verdicts:
        if verdict.kind is VerdictKind.VIOLATED:
            return verdict
    for verdict in verdicts:
        if verdict.kind is VerdictKind.UNKNOWN:
            return verdict
    return verdicts[0]


def check_entries(iu: InstrumentedUnit, entries, cfg: BmcConfig) -> dict:
    """Verdict per property over all entries: any violation wins, then any unknown."""
    per_entry = [check(iu, entry, cfg) for entry in sorted(entries)]
    combined = {}
    for label in iu.properties:
        found = [verdicts[label] for verdicts in per_entry if label in verdicts]
        combined[label] = _combine(found, cfg.bounds())
    return combined
