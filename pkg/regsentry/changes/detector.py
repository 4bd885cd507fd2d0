"""Function-level differencing of two program versions and analysis scoping."""

from __future__ import annotations

from dataclasses import dataclass

from ..minic.analyzer import AnalyzedUnit
from ..minic.callgraph import callees_of, callers_of
from ..minic.nodes import RecordType, VarDecl, walk_statements
from ..shared.errors import EmptyChange
from ..shared.logger import log

SCOPE_POLICY = (
    "one-hop callers and callees over the union of both call graphs; "
    "removed functions scoped in the base graph, added functions in the upgraded graph; "
    "uncalled changed functions are their own entry points"
)


@dataclass(frozen=True)
class ChangeSet:
    modified: frozenset
    added: frozenset
    removed: frozenset

    @property
    def changed(self) -> frozenset:
        return self.modified | self.added | self.removed

    def is_empty(self) -> bool:
        return not self.changed

    def to_dict(self):
        return {
            "modified": sorted(self.modified),
            "added": sorted(self.added),
            "removed": sorted(self.removed),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(frozenset(data["modified"]), frozenset(data["added"]), frozenset(data["removed"]))


@dataclass(frozen=True)
class AnalysisScope:
    monitored: frozenset
    base_entries: frozenset
    upgraded_entries: frozenset
    policy: str = SCOPE_POLICY

    def entries_for(self, version) -> frozenset:
        return self.base_entries if version == "BASE" else self.upgraded_entries

    def to_dict(self):
        return {
            "monitored": sorted(self.monitored),
            "entries": {"base": sorted(self.base_entries), "upgraded": sorted(self.upgraded_entries)},
            "policy": self.policy,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            frozenset(data["monitored"]),
            frozenset(data["entries"]["base"]),
            frozenset(data["entries"]["upgraded"]),
            data.get("policy", SCOPE_POLICY),
        )


def _referenced_records(definition) -> set:
    types = [p.type for p in definition.params] + [definition.return_type]
    types += [s.type for s in walk_statements(definition.body) if isinstance(s, VarDecl)]
    return {t.name for t in types if isinstance(t, RecordType)}


def diff(base: AnalyzedUnit, upgraded: AnalyzedUnit) -> ChangeSet:
    base_names = set(base.program_functions())
    upgraded_names = set(upgraded.program_functions())
    changed_records = {
        name
        for name in set(base.records) | set(upgraded.records)
        if base.records.get(name) != upgraded.records.get(name)
    }
    modified = set()
    for name in base_names & upgraded_names:
        old = base.function(name).definition
        new = upgraded.function(name).definition
        if old != new:
            modified.add(name)
        elif _referenced_records(old) & changed_records:
            modified.add(name)
    change_set = ChangeSet(
        frozenset(modified),
        frozenset(upgraded_names - base_names),
        frozenset(base_names - upgraded_names),
    )
    log(
        f"modified={sorted(change_set.modified)} added={sorted(change_set.added)} "
        f"removed={sorted(change_set.removed)}",
        filter_tag="DIFF",
    )
    return change_set


def _entries(changed, unit: AnalyzedUnit) -> frozenset:
    entries = set()
    names = set(unit.program_functions())
    for name in changed & names:
        callers = callers_of(name, unit.call_graph) & names
        entries |= callers if callers else {name}
    return frozenset(entries)


def scope(change_set: ChangeSet, base: AnalyzedUnit, upgraded: AnalyzedUnit) -> AnalysisScope:
    if change_set.is_empty():
        raise EmptyChange("no change detected between the base and upgraded versions")
    monitored = set(change_set.changed)
    for name in change_set.changed:
        for unit in (base, upgraded):
            if name in unit.call_graph:
                monitored |= callers_of(name, unit.call_graph)
                monitored |= callees_of(name, unit.call_graph)
    result = AnalysisScope(
        frozenset(monitored),
        _entries(set(change_set.changed), base),
        _entries(set(change_set.changed), upgraded),
    )
    log(
        f"monitored={sorted(result.monitored)} base entries={sorted(result.base_entries)} "
        f"upgraded entries={sorted(result.upgraded_entries)}",
        filter_tag="DIFF",
    )
    return result
