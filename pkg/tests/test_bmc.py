"""Tests for property instrumentation and bounded model checking."""
import random
from pathlib import Path

import pytest

from regsentry.bmc import (
    BmcConfig,
    Counterexample,
    UnknownReason,
    Verdict,
    VerdictKind,
    check,
    check_entries,
    encode,
    instrument,
    read_dimacs,
    strip_instrumentation,
)
from regsentry.bmc.simulate import evaluate_single
from regsentry.inference import EqConst, LowerBound, OneOf, Property, UpperBound
from regsentry.minic import ProgramPoint, analyze, parse
from regsentry.shared.errors import ConfigError, RuntimeFault
from regsentry.tracer import Interpreter

from .program_gen import LINEAR_OPS, random_program

STORE = Path(__file__).resolve().parent.parent / "corpus" / "store"


def load_store(version):
    return analyze(parse((STORE / version / "store.mc").read_text(encoding="utf-8"), path="store.mc"))


def store_properties():
    return [
        Property(ProgramPoint.exit("is_available"), OneOf("return", [0, 1])),
        Property(ProgramPoint.loop("available_products", 0), LowerBound("total", 0)),
    ]


def verdicts_by_formula(iu, verdicts):
    return {iu.properties[label].formula.text(): verdict for label, verdict in verdicts.items()}


def test_config_validation():
    with pytest.raises(ConfigError):
        BmcConfig(bit_width=3)
    with pytest.raises(ConfigError):
        BmcConfig(unroll_bound=0)
    assert BmcConfig().bounds("f") == {"N": 5, "D": 16, "W": 16, "entry": "f"}


def test_instrumentation_strips_back_to_original():
    unit = load_store("upgraded")
    iu = instrument(unit, store_properties())
    assert len(iu.properties) == 2
    stripped = {f.name: f for f in strip_instrumentation(iu)}
    for name, info in unit.functions.items():
        assert stripped[name] == info.definition


def test_loop_assertions_map_to_loop_header():
    unit = load_store("upgraded")
    iu = instrument(unit, store_properties())
    source = next(s for s in iu.unit.program_sources())
    lines = source.text.splitlines()
    mapped = {
        iu.original_text(source.path, number).strip()
        for number, text in enumerate(lines, start=1)
        if text.strip().startswith("assert")
    }
    assert "while (i < n && i < 4) {" in mapped
    assert any(text.startswith("return") for text in mapped)


def test_unmappable_properties_are_set_aside():
    unit = load_store("upgraded")
    ghost = Property(ProgramPoint.exit("is_available"), LowerBound("prod.price", 0))
    iu = instrument(unit, [ghost])
    assert iu.unmappable == [ghost]
    assert iu.properties == {}


def test_store_regressions_are_found():
    """The out-of-catalog return value breaks both the 0/1 result and the non-negative total."""
    iu = instrument(load_store("upgraded"), store_properties())
    verdicts = verdicts_by_formula(iu, check_entries(iu, ["available_products"], BmcConfig()))
    one_of = verdicts["return == 0 || return == 1"]
    assert one_of.kind is VerdictKind.VIOLATED
    trace = one_of.counterexample.format_trace()
    assert "return -1;" in trace
    assert trace.endswith("Property violated: return == 0 || return == 1")
    total = verdicts["total >= 0"]
    assert total.kind is VerdictKind.VIOLATED
    catalog = total.counterexample.inputs["catalog"]
    assert len(catalog) == 4 and 0 in catalog


def test_base_store_properties_hold():
    iu = instrument(load_store("base"), store_properties())
    verdicts = check_entries(iu, ["available_products"], BmcConfig())
    assert {v.kind for v in verdicts.values()} == {VerdictKind.VALID}


def test_parallel_queries_give_sequential_verdicts():
    iu = instrument(load_store("upgraded"), store_properties())
    sequential = check_entries(iu, ["available_products"], BmcConfig())
    parallel = check_entries(iu, ["available_products"], BmcConfig(parallelism=3))
    assert parallel == sequential


def test_verdicts_serialize():
    iu = instrument(load_store("upgraded"), store_properties())
    for verdict in check_entries(iu, ["available_products"], BmcConfig()).values():
        assert Verdict.from_dict(verdict.to_dict()) == verdict
        assert Counterexample.from_dict(verdict.counterexample.to_dict()) == verdict.counterexample


def test_encoding_matches_interpreter():
    """The symbolic return value evaluates to the interpreter's result on every 8-bit input."""
    cfg = BmcConfig(bit_width=8)
    for seed in range(12):
        source, entry = random_program(seed, functions=3, params=1)
        unit = analyze(parse(source))
        prop = Property(ProgramPoint.exit(entry), LowerBound("return", -128))
        iu = instrument(unit, [prop])
        encoding = encode(iu.unit, entry, cfg, iu.properties)
        (event,) = encoding.asserts(prop.label)
        (param,) = encoding.inputs.values()
        returned = event.observed["return"]
        for x in range(-128, 128, 3):
            expected = Interpreter(unit, 8).call(entry, [x])
            assert evaluate_single(encoding.manager, {param.name: x}, roots=[returned])[returned.id] == expected


def test_bounds_agree_with_exhaustive_enumeration():
    """Tight return bounds are proved, bounds one step tighter are refuted with replayable inputs."""
    cfg = BmcConfig(bit_width=8)
    for seed in range(20):
        source, entry = random_program(seed, functions=3, params=1, operators=LINEAR_OPS)
        unit = analyze(parse(source))
        results = {x: Interpreter(unit, 8).call(entry, [x]) for x in range(-128, 128)}
        low, high = min(results.values()), max(results.values())
        point = ProgramPoint.exit(entry)
        expected = {LowerBound("return", low).text(): VerdictKind.VALID, UpperBound("return", high).text(): VerdictKind.VALID}
        props = [Property(point, LowerBound("return", low)), Property(point, UpperBound("return", high))]
        if low < 127:
            props.append(Property(point, LowerBound("return", low + 1)))
            expected[props[-1].formula.text()] = VerdictKind.VIOLATED
        if high > -128:
            props.append(Property(point, UpperBound("return", high - 1)))
            expected[props[-1].formula.text()] = VerdictKind.VIOLATED
        iu = instrument(unit, props)
        verdicts = verdicts_by_formula(iu, check_entries(iu, [entry], cfg))
        assert {text: v.kind for text, v in verdicts.items()} == expected, source
        for text, verdict in verdicts.items():
            if verdict.kind is VerdictKind.VIOLATED:
                (value,) = verdict.counterexample.inputs.values()
                assert not verdict.counterexample.violated.formula.evaluate({"return": results[value]}, 8)


def aggregate_program(seed):
    return random_program(
        seed, functions=3, params=1, operators=LINEAR_OPS, arrays=True, records=True, early_returns=True
    )


def observed_extremes(unit, entry):
    """(point, variable) -> (min, max) over every sample of every 8-bit input, faulting runs included."""
    extremes = {}
    for x in range(-128, 128):
        interpreter = Interpreter(unit, 8, monitored=set(unit.program_functions()))
        try:
            interpreter.call(entry, [x])
        except RuntimeFault:
            pass
        for sample in interpreter.samples:
            for name, value in sample.bindings.items():
                low, high = extremes.get((sample.point, name), (value, value))
                extremes[(sample.point, name)] = (min(low, value), max(high, value))
    return extremes


@pytest.mark.parametrize("seed", range(10))
def test_exit_assertions_match_interpreter_with_aggregates(seed):
    """Exactly the non-faulting inputs reach an exit assertion, which observes the interpreter's result."""
    source, entry = aggregate_program(seed)
    unit = analyze(parse(source))
    prop = Property(ProgramPoint.exit(entry), LowerBound("return", -128))
    iu = instrument(unit, [prop])
    encoding = encode(iu.unit, entry, BmcConfig(bit_width=8), iu.properties)
    events = encoding.asserts(prop.label)
    (param,) = encoding.inputs.values()
    roots = [term for event in events for term in (event.guard, event.assumptions, event.observed["return"])]
    for x in range(-128, 128, 3):
        try:
            expected = [Interpreter(unit, 8).call(entry, [x])]
        except RuntimeFault:
            expected = []
        values = evaluate_single(encoding.manager, {param.name: x}, roots=roots)
        reached = [
            values[event.observed["return"].id]
            for event in events
            if values[event.guard.id] and values[event.assumptions.id]
        ]
        assert reached == expected, (source, x)


@pytest.mark.parametrize("seed", range(6))
def test_point_bounds_agree_with_exhaustive_enumeration(seed):
    """ENTRY, LOOP and EXIT bounds over arrays, records and early returns match enumeration."""
    source, entry = aggregate_program(seed)
    unit = analyze(parse(source))
    extremes = observed_extremes(unit, entry)
    rng = random.Random(seed)
    expected = []
    for function in unit.program_functions():
        for point in unit.function(function).points:
            variables = [v for v in unit.schema(point).variables if (point, v) in extremes]
            if not variables:
                continue
            variable = rng.choice(variables)
            low, high = extremes[(point, variable)]
            candidates = [(LowerBound(variable, low), VerdictKind.VALID), (UpperBound(variable, high), VerdictKind.VALID)]
            if low < 127:
                candidates.append((LowerBound(variable, low + 1), VerdictKind.VIOLATED))
            if high > -128:
                candidates.append((UpperBound(variable, high - 1), VerdictKind.VIOLATED))
            for formula, kind in candidates:
                expected.append((Property(point, formula), kind))
    iu = instrument(unit, [prop for prop, _ in expected])
    verdicts = check_entries(iu, [entry], BmcConfig(bit_width=8))
    assert [(prop.describe(), verdicts[prop.label].kind) for prop, _ in expected] == [
        (prop.describe(), kind) for prop, kind in expected
    ], source


def test_conflict_budget_gives_unknown():
    unit = analyze(parse("int f(int a, int b, int c) { int l = (a + b) * c; int r = a * c + b * c; return l - r; }"))
    iu = instrument(unit, [Property(ProgramPoint.exit("f"), EqConst("return", 0))])
    (verdict,) = check(iu, "f", BmcConfig(max_conflicts=1, simulation_rounds=0)).values()
    assert verdict.kind is VerdictKind.UNKNOWN
    assert verdict.reason is UnknownReason.BUDGET
    assert verdict.describe() == "UNKNOWN(budget)"


def test_unreachable_property():
    unit = analyze(parse("int g(int x) { return x; }\nint f(int x) { return x + 1; }"))
    iu = instrument(unit, [Property(ProgramPoint.exit("g"), LowerBound("return", 0))])
    (verdict,) = check_entries(iu, ["f"], BmcConfig(bit_width=8)).values()
    assert verdict.reason is UnknownReason.UNREACHABLE


def test_unwinding_assertions():
    """Runs cut off at the bound are assumed away unless unwinding is checked."""
    unit = analyze(parse("int f(int n) { int i = 0; while (i < n) { i = i + 1; } return i; }"))
    iu = instrument(unit, [Property(ProgramPoint.exit("f"), UpperBound("return", 2))])
    (assumed,) = check(iu, "f", BmcConfig(unroll_bound=2, bit_width=8)).values()
    assert assumed.kind is VerdictKind.VALID
    (checked,) = check(iu, "f", BmcConfig(unroll_bound=2, bit_width=8, unwinding_assertions=True)).values()
    assert checked.reason is UnknownReason.UNWINDING


def test_deep_call_chain_is_unsupported():
    unit = analyze(parse("int h(int x) { return x; }\nint g(int x) { return h(x); }\nint f(int x) { return g(x); }"))
    iu = instrument(unit, [Property(ProgramPoint.exit("f"), LowerBound("return", 0))])
    (verdict,) = check(iu, "f", BmcConfig(inline_depth=1, bit_width=8)).values()
    assert verdict.reason is UnknownReason.UNSUPPORTED


TRUNCATING_UNIT = (
    "int h2(int x) { return x; }\n"
    "int h1(int x) { return h2(x); }\n"
    "int g(int x) { if (x < 0) { return 0; } return x; }\n"
    "int f(int x) { return g(x) + h1(x); }\n"
    "int k(int x) { return g(x); }\n"
)


def test_truncated_call_leaves_other_assertions_exact():
    """A call past the inline depth does not cloud assertions reached without it."""
    unit = analyze(parse(TRUNCATING_UNIT))
    prop = Property(ProgramPoint.exit("g"), LowerBound("return", 0))
    iu = instrument(unit, [prop])
    cfg = BmcConfig(inline_depth=1, bit_width=8)
    assert check(iu, "f", cfg)[prop.label].kind is VerdictKind.VALID
    assert check(iu, "k", cfg)[prop.label].kind is VerdictKind.VALID
    assert check_entries(iu, ["f", "k"], cfg)[prop.label].kind is VerdictKind.VALID


def test_truncated_call_still_reports_exact_violations():
    unit = analyze(parse(TRUNCATING_UNIT))
    prop = Property(ProgramPoint.exit("g"), UpperBound("return", 5))
    iu = instrument(unit, [prop])
    verdict = check(iu, "f", BmcConfig(inline_depth=1, bit_width=8))[prop.label]
    assert verdict.kind is VerdictKind.VIOLATED
    (value,) = verdict.counterexample.inputs.values()
    assert value > 5


def test_functions_behind_truncated_call_are_unsupported():
    unit = analyze(parse(TRUNCATING_UNIT))
    hidden = Property(ProgramPoint.exit("h2"), LowerBound("return", -128))
    after = Property(ProgramPoint.exit("f"), LowerBound("return", 0))
    iu = instrument(unit, [hidden, after])
    verdicts = check(iu, "f", BmcConfig(inline_depth=1, bit_width=8))
    assert verdicts[hidden.label].reason is UnknownReason.UNSUPPORTED
    assert verdicts[after.label].reason is UnknownReason.UNSUPPORTED


def test_queries_written_as_dimacs(tmp_path):
    unit = analyze(parse("int f(int x) { if (x < 0) { return 0 - x; } return x; }"))
    prop = Property(ProgramPoint.exit("f"), LowerBound("return", -128))
    iu = instrument(unit, [prop])
    cfg = BmcConfig(bit_width=8, simulation_rounds=0, cnf_dir=str(tmp_path))
    (verdict,) = check(iu, "f", cfg).values()
    assert verdict.kind is VerdictKind.VALID
    cnf = read_dimacs(tmp_path / f"f_{prop.label}.cnf")
    assert len(cnf.input_map()["x"]) == 8
    assert prop.label in cnf.comments[0]
