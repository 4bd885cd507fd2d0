"""Trace logs and their line-oriented text format.

    version BASE
    width 16
    test store_two
    point is_available ENTRY prod.items prod.catalog
    s 0 store_two 3 5 1

`point` lines declare schemas in order; `s` lines refer to them by index
and list decimal W-bit signed values positionally.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..minic.analyzer import PointKind, ProgramPoint
from ..shared.errors import TraceFormatError
from .interpreter import TraceSample

VERSIONS = ("BASE", "UPGRADED")


@dataclass(frozen=True)
class TraceLog:
    version: str = "BASE"
    samples: tuple[TraceSample, ...] = ()
    tests_run: tuple[str, ...] = ()
    # (point, variables) in declaration order
    schemas: tuple[tuple[ProgramPoint, tuple[str, ...]], ...] = ()
    bit_width: int = 16

    def samples_at(self, point: ProgramPoint) -> list[TraceSample]:
        return [s for s in self.samples if s.point == point]

    def points(self) -> list[ProgramPoint]:
        return [point for point, _ in self.schemas]


def merge_logs(logs, version="BASE", bit_width=16) -> TraceLog:
    """Concatenate per-test logs, keeping the first declaration of each schema."""
    samples = []
    tests = []
    schemas = {}
    for log in logs:
        samples.extend(log.samples)
        tests.extend(log.tests_run)
        for point, variables in log.schemas:
            schemas.setdefault(point, variables)
    samples.sort(key=lambda s: (s.test, s.sequence))
    ordered = tuple(sorted(schemas.items(), key=lambda item: item[0].sort_key()))
    return TraceLog(version, tuple(samples), tuple(tests), ordered, bit_width)


def format_trace(log: TraceLog) -> str:
    lines = [f"version {log.version}", f"width {log.bit_width}"]
    lines.extend(f"test {name}" for name in log.tests_run)
    index = {}
    for position, (point, variables) in enumerate(log.schemas):
        index[point] = position
        lines.append(" ".join(["point", point.function, point.kind_text(), *variables]))
    for sample in log.samples:
        values = " ".join(str(v) for v in sample.values)
        lines.append(f"s {index[sample.point]} {sample.test} {sample.sequence} {values}".rstrip())
    return "\n".join(lines) + "\n"


def write_trace(log: TraceLog, path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_trace(log), encoding="utf-8")
    return target


def _int(text, line_no, what):
    try:
        return int(text)
    except ValueError:
        raise TraceFormatError(f"{what} is not an integer: {text!r}", line_no) from None


def parse_trace(text: str) -> TraceLog:
    version = None
    width = 16
    tests = []
    schemas = []
    samples = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "version":
            if len(parts) != 2 or parts[1] not in VERSIONS:
                raise TraceFormatError("expected 'version BASE' or 'version UPGRADED'", line_no)
            version = parts[1]
        elif tag == "width":
            if len(parts) != 2:
                raise TraceFormatError("expected 'width <bits>'", line_no)
            width = _int(parts[1], line_no, "width")
        elif tag == "test":
            if len(parts) != 2:
                raise TraceFormatError("expected 'test <name>'", line_no)
            tests.append(parts[1])
        elif tag == "point":
            schemas.append(_parse_point(parts, line_no))
        elif tag == "s":
            samples.append(_parse_sample(parts, line_no, schemas, width))
        else:
            raise TraceFormatError(f"unknown record type {tag!r}", line_no)
    if version is None and (tests or schemas or samples):
        raise TraceFormatError("missing 'version' header", 1)
    return TraceLog(version or "BASE", tuple(samples), tuple(tests), tuple(schemas), width)


def _parse_point(parts, line_no):
    if len(parts) < 3:
        raise TraceFormatError("expected 'point <function> <ENTRY|EXIT|LOOP k> <vars...>'", line_no)
    function, kind = parts[1], parts[2]
    if kind == "LOOP":
        if len(parts) < 4:
            raise TraceFormatError("LOOP point without an ordinal", line_no)
        point = ProgramPoint.loop(function, _int(parts[3], line_no, "loop ordinal"))
        variables = parts[4:]
    elif kind in (PointKind.ENTRY.value, PointKind.EXIT.value):
        point = ProgramPoint(function, PointKind(kind))
        variables = parts[3:]
    else:
        raise TraceFormatError(f"unknown point kind {kind!r}", line_no)
    if len(set(variables)) != len(variables):
        raise TraceFormatError("duplicate variable in point declaration", line_no)
    return point, tuple(variables)


def _parse_sample(parts, line_no, schemas, width):
    if len(parts) < 4:
        raise TraceFormatError("expected 's <point-index> <test> <seq> <values...>'", line_no)
    index = _int(parts[1], line_no, "point index")
    if not 0 <= index < len(schemas):
        raise TraceFormatError(f"undeclared point index {index}", line_no)
    point, variables = schemas[index]
    values = tuple(_int(v, line_no, "value") for v in parts[4:])
    if len(values) != len(variables):
        raise TraceFormatError(
            f"sample has {len(values)} value(s) but point '{point}' declares {len(variables)} variable(s)",
            line_no,
        )
    limit = 1 << (width - 1)
    for value in values:
        if not -limit <= value < limit:
            raise TraceFormatError(f"value {value} does not fit in {width} bits", line_no)
    return TraceSample(point, variables, values, parts[2], _int(parts[3], line_no, "sequence"))


def read_trace(path) -> TraceLog:
    return parse_trace(Path(path).read_text(encoding="utf-8"))
