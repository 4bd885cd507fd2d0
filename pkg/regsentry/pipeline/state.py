"""Cumulative pipeline state persisted after every phase as `phase<N>.json`."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..bmc.checker import Verdict
from ..changes.detector import AnalysisScope, ChangeSet
from ..inference.properties import Property, PropertyStatus
from ..inference.serialization import format_property, parse_property
from ..shared.errors import ConfigError


def property_to_dict(prop: Property) -> dict:
    data = {"line": format_property(prop)}
    if prop.verdict is not None:
        data["verdict"] = prop.verdict.to_dict()
    if isinstance(prop.evidence, dict):
        data["sample"] = prop.evidence
    return data


def property_from_dict(data) -> Property:
    prop = parse_property(data["line"])
    verdict = Verdict.from_dict(data["verdict"]) if "verdict" in data else None
    evidence = data.get("sample")
    if evidence is None and verdict is not None:
        evidence = verdict.counterexample
    return replace(prop, evidence=evidence, verdict=verdict)


@dataclass
class PipelineState:
    phase: int = 0
    no_change: bool = False
    change_set: Optional[ChangeSet] = None
    scope: Optional[AnalysisScope] = None
    properties: list = field(default_factory=list)

    def with_status(self, *statuses) -> list[Property]:
        return [p for p in self.properties if p.status in statuses]

    def replace_properties(self, updated) -> None:
        """Swap in new lifecycle states, keyed by property id, keeping canonical order."""
        by_id = {p.id: p for p in updated}
        self.properties = sorted(
            (by_id.get(p.id, p) for p in self.properties), key=lambda p: p.sort_key()
        )

    def to_dict(self) -> dict:
        return {
            "phase": self.phase,
            "no_change": self.no_change,
            "change_set": self.change_set.to_dict() if self.change_set else None,
            "scope": self.scope.to_dict() if self.scope else None,
            "properties": [property_to_dict(p) for p in self.properties],
        }

    @classmethod
    def from_dict(cls, data) -> "PipelineState":
        return cls(
            data["phase"],
            data.get("no_change", False),
            ChangeSet.from_dict(data["change_set"]) if data.get("change_set") else None,
            AnalysisScope.from_dict(data["scope"]) if data.get("scope") else None,
            [property_from_dict(p) for p in data.get("properties", [])],
        )


def state_path(output_dir, phase: int) -> Path:
    return Path(output_dir) / f"phase{phase}.json"


def save_state(state: PipelineState, output_dir) -> Path:
    target = state_path(output_dir, state.phase)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(state.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


def load_state(output_dir, phase: int) -> PipelineState:
    source = state_path(output_dir, phase)
    if not source.is_file():
        raise ConfigError(f"cannot resume: '{source}' not found, run the earlier phases first")
    return PipelineState.from_dict(json.loads(source.read_text(encoding="utf-8")))
