"""Tests for the `key = value` pipeline configuration."""
from pathlib import Path

import pytest

from regsentry.bmc import BmcConfig
from regsentry.shared.config import load_config, parse_config
from regsentry.shared.errors import ConfigError

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
MINIMAL = "base_dir = v1\nupgraded_dir = v2\ntests_base = tests/base.manifest\n"


def test_defaults_and_relative_paths():
    cfg = parse_config(MINIMAL, "/projects/demo")
    assert cfg.base_dir == Path("/projects/demo/v1")
    assert cfg.tests_base == Path("/projects/demo/tests/base.manifest")
    assert cfg.tests_upgrade is None
    assert cfg.output_dir == Path("/projects/demo/regsentry-out")
    assert (cfg.unroll_bound, cfg.inline_depth, cfg.bit_width) == (5, 16, 16)
    assert (cfg.max_conflicts, cfg.timeout) == (20000, 30.0)
    assert cfg.sources == "*.mc"
    assert cfg.unwinding_assertions is False


def test_every_key():
    text = MINIMAL + (
        "# tuning\n"
        "sources = *.minic\n"
        "tests_upgrade = tests/upgrade.manifest\n"
        "unroll_bound = 3   # short loops\n"
        "inline_depth = 4\n"
        "bit_width = 8\n"
        "min_support = 2\n"
        "solver_budget = 500 2.5\n"
        "parallelism = 4\n"
        "output_dir = out\n"
        "seed = 7\n"
        "simulation_rounds = 0\n"
        "unwinding_assertions = yes\n"
    )
    cfg = parse_config(text, "root")
    assert cfg.sources == "*.minic"
    assert cfg.tests_upgrade == Path("root/tests/upgrade.manifest")
    assert cfg.unroll_bound == 3 and cfg.bit_width == 8
    assert (cfg.max_conflicts, cfg.timeout) == (500, 2.5)
    assert cfg.output_dir == Path("root/out")
    assert cfg.unwinding_assertions is True
    bmc = BmcConfig.from_pipeline(cfg)
    assert bmc.bounds() == {"N": 3, "D": 4, "W": 8}
    assert bmc.simulation_rounds == 0 and bmc.seed == 7


def test_empty_upgrade_suite_is_allowed():
    cfg = parse_config(MINIMAL + "tests_upgrade =\n")
    assert cfg.tests_upgrade is None


@pytest.mark.parametrize(
    "extra, fragment",
    [
        ("colour = blue\n", "line 4: unknown key 'colour'"),
        ("bit_width = wide\n", "line 4: 'bit_width' expects an integer"),
        ("solver_budget = 100\n", "line 4: solver_budget expects"),
        ("solver_budget = 0 5\n", "line 4: solver budgets must be positive"),
        ("unwinding_assertions = maybe\n", "line 4: expected a boolean"),
        ("base_dir = again\n", "line 4: duplicate key 'base_dir'"),
        ("just some words\n", "line 4: expected 'key = value'"),
    ],
)
def test_malformed_lines_name_the_line(extra, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(MINIMAL + extra)
    assert fragment in str(info.value)


def test_missing_required_key():
    with pytest.raises(ConfigError) as info:
        parse_config("base_dir = v1\nupgraded_dir = v2\n")
    assert "tests_base" in str(info.value)


def test_load_config_validates_paths(tmp_path):
    (tmp_path / "v1").mkdir()
    (tmp_path / "v2").mkdir()
    (tmp_path / "v1" / "a.mc").write_text("int f() { return 0; }\n", encoding="utf-8")
    config = tmp_path / "regsentry.conf"
    config.write_text(MINIMAL, encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        load_config(config)
    assert "upgraded_dir" in str(info.value)
    (tmp_path / "v2" / "a.mc").write_text("int f() { return 1; }\n", encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        load_config(config)
    assert "tests_base" in str(info.value)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.conf")


def test_store_configuration():
    cfg = load_config(CORPUS / "store" / "regsentry.conf")
    assert [p.name for p in cfg.source_files("BASE")] == ["store.mc"]
    assert cfg.tests_upgrade.name == "upgrade.manifest"
    echo = cfg.echo()
    assert echo["bit_width"] == 16
    assert isinstance(echo["base_dir"], str)
    moved = cfg.with_output_dir("elsewhere")
    assert moved.output_dir == Path("elsewhere") and moved.base_dir == cfg.base_dir
