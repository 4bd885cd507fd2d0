"""Pipeline configuration in the `key = value` format.

    # store example
    base_dir = base
    upgraded_dir = upgraded
    tests_base = tests/base.manifest
    solver_budget = 20000 30
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigError

_PATH_KEYS = ("base_dir", "upgraded_dir", "tests_base", "tests_upgrade", "output_dir")
_INT_KEYS = ("unroll_bound", "inline_depth", "bit_width", "min_support", "parallelism", "seed", "simulation_rounds")


@dataclass(frozen=True)
class PipelineConfig:
    base_dir: Path
    upgraded_dir: Path
    tests_base: Path
    tests_upgrade: Optional[Path] = None
    sources: str = "*.mc"
    unroll_bound: int = 5
    inline_depth: int = 16
    bit_width: int = 16
    min_support: int = 1
    max_conflicts: int = 20000
    timeout: float = 30.0
    parallelism: int = 1
    output_dir: Path = Path("regsentry-out")
    seed: int = 0
    simulation_rounds: int = 256
    unwinding_assertions: bool = False

    def source_files(self, version: str) -> list[Path]:
        directory = self.base_dir if version == "BASE" else self.upgraded_dir
        return sorted(directory.glob(self.sources))

    def validate(self) -> "PipelineConfig":
        for key in ("base_dir", "upgraded_dir"):
            directory = getattr(self, key)
            if not directory.is_dir():
                raise ConfigError(f"{key}: '{directory}' is not a directory")
            if not sorted(directory.glob(self.sources)):
                raise ConfigError(f"{key}: no file matches '{self.sources}' in '{directory}'")
        if not self.tests_base.is_file():
            raise ConfigError(f"tests_base: '{self.tests_base}' does not exist")
        if self.tests_upgrade is not None and not self.tests_upgrade.is_file():
            raise ConfigError(f"tests_upgrade: '{self.tests_upgrade}' does not exist")
        if self.min_support < 1:
            raise ConfigError("min_support must be at least 1")
        return self

    def with_output_dir(self, output_dir) -> "PipelineConfig":
        return replace(self, output_dir=Path(output_dir))

    def echo(self) -> dict:
        """JSON-friendly view of every setting, used in report metadata."""
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            data[f.name] = str(value) if isinstance(value, Path) else value
        return data


def _parse_bool(value, line_no):
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"line {line_no}: expected a boolean, found {value!r}")


def parse_config(text: str, base_path=".") -> PipelineConfig:
    base = Path(base_path)
    values = {}
    seen = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {line_no}: expected 'key = value'")
        if key in seen:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        seen.add(key)
        if key in _PATH_KEYS:
            values[key] = base / value if value else None
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"line {line_no}: '{key}' expects an integer, found {value!r}") from None
        elif key == "solver_budget":
            parts = value.split()
            try:
                if len(parts) != 2:
                    raise ValueError
                values["max_conflicts"] = int(parts[0])
                values["timeout"] = float(parts[1])
            except ValueError:
                raise ConfigError(f"line {line_no}: solver_budget expects '<conflicts> <seconds>'") from None
            if values["max_conflicts"] < 1 or values["timeout"] <= 0:
                raise ConfigError(f"line {line_no}: solver budgets must be positive")
        elif key == "sources":
            values[key] = value
        elif key == "unwinding_assertions":
            values[key] = _parse_bool(value, line_no)
        else:
            raise ConfigError(f"line {line_no}: unknown key '{key}'")
    for required in ("base_dir", "upgraded_dir", "tests_base"):
        if values.get(required) is None:
            raise ConfigError(f"missing required key '{required}'")
    if "output_dir" in values and values["output_dir"] is None:
        del values["output_dir"]
    if "output_dir" not in values:
        values["output_dir"] = base / "regsentry-out"
    return PipelineConfig(**values)


def load_config(path) -> PipelineConfig:
    """Read and validate a configuration file; relative paths resolve against its directory."""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"configuration file '{config_path}' not found")
    return parse_config(config_path.read_text(encoding="utf-8"), config_path.parent).validate()
