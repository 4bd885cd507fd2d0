"""Regression reports: a JSON document and an annotated text rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from ..changes.detector import AnalysisScope, ChangeSet
from ..inference.properties import Property, PropertyStatus
from ..shared.logger import log

EXIT_CLEAN = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2

DISCARDED = (PropertyStatus.FALSE, PropertyStatus.UNKNOWN)
NON_REGRESSION = (
    PropertyStatus.NON_REGRESSION,
    PropertyStatus.VIOLATED,
    PropertyStatus.PRESERVED,
    PropertyStatus.UNCHECKED,
)
# statuses a property can only reach after phase 3 traced the upgraded version
_UPGRADED_STATUSES = NON_REGRESSION + (PropertyStatus.OUTDATED,)


@dataclass
class RegressionReport:
    metadata: dict
    change_set: Optional[ChangeSet] = None
    scope: Optional[AnalysisScope] = None
    properties: list = field(default_factory=list)
    # version -> path -> line -> [property ids]
    annotations: dict = field(default_factory=dict)
    # version -> path -> source text
    sources: dict = field(default_factory=dict, repr=False)

    def with_status(self, *statuses) -> list[Property]:
        return [p for p in self.properties if p.status in statuses]

    @property
    def dynamic(self):
        return list(self.properties)

    @property
    def discarded(self):
        return self.with_status(*DISCARDED)

    @property
    def outdated(self):
        return self.with_status(PropertyStatus.OUTDATED)

    @property
    def non_regression(self):
        return self.with_status(*NON_REGRESSION)

    @property
    def violated(self):
        return self.with_status(PropertyStatus.VIOLATED)

    @property
    def preserved(self):
        return self.with_status(PropertyStatus.PRESERVED)

    @property
    def unchecked(self):
        return self.with_status(PropertyStatus.UNCHECKED)

    @property
    def unmappable(self):
        return self.with_status(PropertyStatus.UNMAPPABLE)

    @property
    def exit_status(self) -> int:
        return EXIT_VIOLATIONS if self.violated else EXIT_CLEAN

    # --- JSON --------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "change_set": self.change_set.to_dict() if self.change_set else None,
            "scope": self.scope.to_dict() if self.scope else None,
            "properties": [_property_entry(p) for p in self.properties],
            "inventory": {
                "dynamic": [p.id for p in self.dynamic],
                "discarded": [p.id for p in self.discarded],
                "outdated": [p.id for p in self.outdated],
                "non_regression": [p.id for p in self.non_regression],
                "violated": [p.id for p in self.violated],
                "preserved": [p.id for p in self.preserved],
                "unchecked": [p.id for p in self.unchecked],
                "unmappable": [p.id for p in self.unmappable],
            },
            "annotations": {
                version: {path: {str(line): ids for line, ids in lines.items()} for path, lines in files.items()}
                for version, files in self.annotations.items()
            },
            "exit_status": self.exit_status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    # --- text --------------------------------------------------------------

    def to_text(self) -> str:
        out = ["regsentry regression report", "=" * 27, ""]
        if self.metadata.get("no_change"):
            out += ["no change detected: the base and upgraded versions are identical", ""]
            out.append(f"exit status: {self.exit_status}")
            return "\n".join(out) + "\n"
        bounds = self.metadata.get("bounds", {})
        out.append("bounds: " + ", ".join(f"{k}={v}" for k, v in sorted(bounds.items())))
        if self.change_set:
            for kind, names in self.change_set.to_dict().items():
                out.append(f"{kind}: {', '.join(names) or '-'}")
        if self.scope:
            out.append(f"monitored: {', '.join(sorted(self.scope.monitored))}")
            out.append(f"entries (base): {', '.join(sorted(self.scope.base_entries)) or '-'}")
            out.append(f"entries (upgraded): {', '.join(sorted(self.scope.upgraded_entries)) or '-'}")
        out.append("")
        sections = (
            ("Violated", self.violated),
            ("Outdated", self.outdated),
            ("Preserved", self.preserved),
            ("Unchecked", self.unchecked),
            ("Discarded", self.discarded),
            ("Unmappable", self.unmappable),
        )
        for title, props in sections:
            out.append(f"{title} ({len(props)})")
            for prop in props:
                detail = prop.verdict.describe() if prop.verdict is not None else ""
                out.append(f"  [{prop.id}] {prop.describe()}" + (f"  {detail}" if detail else ""))
                if prop.status is PropertyStatus.OUTDATED and isinstance(prop.evidence, dict):
                    values = ", ".join(f"{k} = {v}" for k, v in prop.evidence["bindings"].items())
                    out.append(f"      falsified by test {prop.evidence['test']}: {values}")
            out.append("")
        for prop in self.violated:
            if prop.verdict is not None and prop.verdict.counterexample is not None:
                out.append(prop.verdict.counterexample.format_trace())
                out.append("")
        out.extend(self._annotated_sources())
        out.append(f"exit status: {self.exit_status}")
        return "\n".join(out) + "\n"

    def _annotated_sources(self) -> list[str]:
        by_id = {p.id: p for p in self.properties}
        out = []
        for version in sorted(self.annotations):
            for path in sorted(self.annotations[version]):
                lines = self.sources.get(version, {}).get(path, "").splitlines()
                out.append(f"--- {version.lower()}: {path}")
                for line in sorted(self.annotations[version][path]):
                    text = lines[line - 1].rstrip() if 0 < line <= len(lines) else ""
                    for pid in self.annotations[version][path][line]:
                        prop = by_id[pid]
                        out.append(f"     // {prop.status.value} {prop.formula.text()}  [{pid}]")
                    out.append(f"{line:>4} {text}")
                out.append("")
        return out


def _property_entry(prop: Property) -> dict:
    entry = {
        "id": prop.id,
        "function": prop.point.function,
        "point": prop.point.kind_text(),
        "formula": prop.formula.text(),
        "status": prop.status.value,
    }
    if prop.verdict is not None:
        entry["verdict"] = prop.verdict.describe()
        entry["verdict_bounds"] = dict(prop.verdict.bounds)
        if prop.verdict.counterexample is not None and prop.status is PropertyStatus.VIOLATED:
            counterexample = prop.verdict.counterexample.to_dict()
            entry["counterexample"] = {k: counterexample[k] for k in ("entry", "inputs", "steps")}
    if prop.status is PropertyStatus.OUTDATED and isinstance(prop.evidence, dict):
        entry["outdated_by"] = prop.evidence
    return entry


def _annotate(unit, props) -> dict:
    files = {}
    for prop in props:
        info = unit.functions.get(prop.point.function)
        if info is None:
            continue
        for line in info.anchor_lines(prop.point):
            files.setdefault(info.path, {}).setdefault(line, []).append(prop.id)
    return files


def build_report(pipeline, state) -> RegressionReport:
    cfg = pipeline.cfg
    metadata = {
        "tool": "regsentry",
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "versions": {"base": str(cfg.base_dir), "upgraded": str(cfg.upgraded_dir)},
        "config": cfg.echo(),
        "bounds": pipeline.bmc.bounds(),
        "phase": state.phase,
        "no_change": state.no_change,
    }
    if state.scope is not None:
        metadata["scope_policy"] = state.scope.policy
    report = RegressionReport(metadata, state.change_set, state.scope, list(state.properties))
    if state.properties:
        base, upgraded = pipeline.unit("BASE"), pipeline.unit("UPGRADED")
        early = [p for p in state.properties if p.status not in _UPGRADED_STATUSES]
        late = [p for p in state.properties if p.status in _UPGRADED_STATUSES]
        report.annotations = {"BASE": _annotate(base, early), "UPGRADED": _annotate(upgraded, late)}
        report.sources = {
            "BASE": {s.path: s.text for s in base.program_sources()},
            "UPGRADED": {s.path: s.text for s in upgraded.program_sources()},
        }
    return report


def write_report(report: RegressionReport, output_dir, formats=("json", "text")) -> list[Path]:
    target = Path(output_dir)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = target / "report.json"
        path.write_text(report.to_json(), encoding="utf-8")
        written.append(path)
    if "text" in formats:
        path = target / "report.txt"
        path.write_text(report.to_text(), encoding="utf-8")
        written.append(path)
    log(
        f"{len(report.violated)} violated, {len(report.outdated)} outdated, "
        f"{len(report.preserved)} preserved, {len(report.discarded)} discarded",
        filter_tag="REPORT",
    )
    return written
