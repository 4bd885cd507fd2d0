"""MCP tool server exposing the regression analysis over stdio."""

import asyncio
import sys

from mcp.server.fastmcp import FastMCP

from .bmc.checker import check_entries
from .bmc.config import BmcConfig
from .bmc.instrument import instrument
from .changes.detector import diff, scope
from .inference.properties import PropertyStatus
from .inference.serialization import parse_property
from .minic.analyzer import analyze
from .minic.parser import parse
from .pipeline.phases import run_all
from .shared.config import load_config
from .shared.errors import EmptyChange, RegSentryError
from .shared.logger import log

_STATUSES = {status.value for status in PropertyStatus}

mcp_name = "RegSentry Regression Analysis"
mcp = FastMCP(mcp_name, log_level="ERROR")


def _error(exc) -> dict:
    log(f"tool failed: {exc}", filter_tag="MCP")
    return {"error": str(exc)}


@mcp.tool()
async def run_regression_check(config_path: str, resume_from: int = 1) -> dict:
    """
    Runs the four analysis phases for a configuration file and returns the JSON report.

    Args:
        config_path (str): Path to a `key = value` configuration file.
        resume_from (int): Phase (1-4) to resume from, using the persisted state of earlier phases.
    """

    def work():
        return run_all(load_config(config_path), resume_from=resume_from).to_dict()

    try:
        return await asyncio.to_thread(work)
    except RegSentryError as exc:
        return _error(exc)


@mcp.tool()
async def diff_versions(base_source: str, upgraded_source: str) -> dict:
    """
    Compares two versions of a MiniC program and returns the change set and the analysis scope.

    Args:
        base_source (str): MiniC text of the base version.
        upgraded_source (str): MiniC text of the upgraded version.
    """
    try:
        base = analyze(parse(base_source, path="base.mc"))
        upgraded = analyze(parse(upgraded_source, path="upgraded.mc"))
        change_set = diff(base, upgraded)
        try:
            analysis_scope = scope(change_set, base, upgraded)
        except EmptyChange:
            return {"change_set": change_set.to_dict(), "scope": None, "no_change": True}
        return {"change_set": change_set.to_dict(), "scope": analysis_scope.to_dict(), "no_change": False}
    except RegSentryError as exc:
        return _error(exc)


@mcp.tool()
async def describe_program(source: str) -> dict:
    """
    Lists the functions of a MiniC program, its call graph and the variables observable at every program point.

    Args:
        source (str): MiniC program text.
    """
    try:
        unit = analyze(parse(source, path="program.mc"))
    except RegSentryError as exc:
        return _error(exc)
    functions = {}
    for name, info in unit.functions.items():
        functions[name] = {
            "line": info.definition.span.line,
            "points": {schema.point.kind_text(): list(schema.variables) for schema in info.points.values()},
        }
    return {"functions": functions, "calls": [list(edge) for edge in sorted(unit.call_graph.edges)]}


@mcp.tool()
async def check_properties(
    source: str,
    entry: str,
    properties: str,
    unroll_bound: int = 5,
    bit_width: int = 16,
) -> dict:
    """
    Checks property lines against a MiniC program with bounded model checking from one entry function.

    Args:
        source (str): MiniC program text.
        entry (str): Function the exploration starts from.
        properties (str): One property per line, e.g. `available_products LOOP 0 total >= 0`.
            A leading status word is optional.
        unroll_bound (int): Number of times every loop is unrolled.
        bit_width (int): Integer width in bits (4-32).
    """

    def work():
        unit = analyze(parse(source, path="program.mc"))
        props = []
        for line_no, raw in enumerate(properties.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.split()[0] not in _STATUSES:
                line = f"{PropertyStatus.DYNAMIC.value} {line}"
            props.append(parse_property(line, line_no))
        cfg = BmcConfig(unroll_bound=unroll_bound, bit_width=bit_width)
        iu = instrument(unit, props)
        verdicts = check_entries(iu, [entry], cfg)
        results = []
        for prop in props:
            verdict = verdicts.get(prop.label)
            result = {"id": prop.id, "property": prop.describe()}
            if verdict is None:
                result["verdict"] = "UNMAPPABLE"
            else:
                result["verdict"] = verdict.describe()
                if verdict.counterexample is not None:
                    result["counterexample"] = verdict.counterexample.format_trace()
            results.append(result)
        return {"entry": entry, "bounds": cfg.bounds(entry), "results": results}

    try:
        return await asyncio.to_thread(work)
    except RegSentryError as exc:
        return _error(exc)


def run_server():
    """Run the regsentry MCP server on stdio."""
    print(f"{mcp_name} running on stdio", file=sys.stderr)
    mcp.run()


if __name__ == "__main__":
    run_server()
