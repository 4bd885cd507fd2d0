"""Test the RegSentry MCP tools."""
from pathlib import Path

import pytest

from regsentry.server import (
    check_properties,
    describe_program,
    diff_versions,
    mcp,
    mcp_name,
    run_regression_check,
)

from .regression_pairs import PAIRS, write_project

STORE = Path(__file__).resolve().parent.parent / "corpus" / "store"
BASE = (STORE / "base" / "store.mc").read_text(encoding="utf-8")
UPGRADED = (STORE / "upgraded" / "store.mc").read_text(encoding="utf-8")


class ToolTester:
    """Calls the tool functions the way an MCP client would and keeps the results."""

    def __init__(self):
        self.results = {}

    async def call(self, name, **arguments):
        tools = {
            "run_regression_check": run_regression_check,
            "diff_versions": diff_versions,
            "describe_program": describe_program,
            "check_properties": check_properties,
        }
        result = await tools[name](**arguments)
        self.results[name] = result
        return result


@pytest.mark.asyncio
async def test_tools_are_registered():
    """The server advertises every analysis tool."""
    tools = await mcp.list_tools()
    assert mcp_name == "RegSentry Regression Analysis"
    assert {tool.name for tool in tools} == {
        "run_regression_check",
        "diff_versions",
        "describe_program",
        "check_properties",
    }


@pytest.mark.asyncio
async def test_diff_versions():
    """The store upgrade modifies only the availability check."""
    tester = ToolTester()
    result = await tester.call("diff_versions", base_source=BASE, upgraded_source=UPGRADED)
    assert result["change_set"]["modified"] == ["is_available"]
    assert result["scope"]["entries"]["upgraded"] == ["available_products"]
    assert result["no_change"] is False
    same = await tester.call("diff_versions", base_source=BASE, upgraded_source=BASE)
    assert same["no_change"] is True and same["scope"] is None


@pytest.mark.asyncio
async def test_describe_program():
    """Program points and call edges of the store example."""
    result = await describe_program(BASE)
    products = result["functions"]["available_products"]
    assert set(products["points"]) == {"ENTRY", "LOOP 0", "EXIT"}
    assert products["points"]["LOOP 0"][-2:] == ["total", "i"]
    assert result["calls"] == [["available_products", "is_available"]]


@pytest.mark.asyncio
async def test_describe_program_reports_parse_errors():
    """Malformed sources come back as an error entry."""
    result = await describe_program("int f( { }")
    assert "error" in result


@pytest.mark.asyncio
async def test_check_properties():
    """The upgraded store breaks the non-negative total; unknown variables are unmappable."""
    lines = "\n".join(
        [
            "available_products LOOP 0 total >= 0",
            "NON_REGRESSION is_available EXIT return <= 1",
            "available_products EXIT missing >= 0",
        ]
    )
    result = await check_properties(UPGRADED, "available_products", lines)
    assert result["bounds"] == {"N": 5, "D": 16, "W": 16, "entry": "available_products"}
    verdicts = [r["verdict"] for r in result["results"]]
    assert verdicts == ["VIOLATED", "VALID", "UNMAPPABLE"]
    assert "Property violated: total >= 0" in result["results"][0]["counterexample"]


@pytest.mark.asyncio
async def test_check_properties_rejects_bad_lines():
    """A property line that names no point is an error."""
    result = await check_properties(BASE, "available_products", "available_products total >= 0")
    assert "error" in result


@pytest.mark.asyncio
@pytest.mark.timeout(60)
async def test_run_regression_check(tmp_path):
    """A seeded off-by-one comes back as a violation in the JSON report."""
    pair = next(p for p in PAIRS if p.name == "clamp")
    config = write_project(tmp_path, pair.base, pair.faulty, pair.tests, bit_width=8)
    report = await run_regression_check(str(config))
    assert report["exit_status"] == 1
    assert report["inventory"]["violated"]
    missing = await run_regression_check(str(tmp_path / "absent.conf"))
    assert "error" in missing
