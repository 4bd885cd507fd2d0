"""The four analysis phases and their composition.

Every phase reads the cumulative state left by its predecessor, moves
properties along their lifecycle and persists the new state, so a run can
resume from any phase.
"""

from __future__ import annotations

from pathlib import Path

from ..bmc.checker import UnknownReason, Verdict, VerdictKind, check_entries
from ..bmc.config import BmcConfig
from ..bmc.instrument import instrument
from ..changes.detector import diff, scope
from ..inference.engine import infer
from ..inference.properties import PropertyStatus, holds
from ..inference.serialization import write_properties
from ..minic.analyzer import AnalyzedUnit, analyze
from ..minic.parser import parse_file
from ..shared.config import PipelineConfig
from ..shared.errors import ConfigError, EmptyChange, PipelineError, RegSentryError
from ..shared.logger import log
from ..tracer.runner import Suite, load_manifest, run_suite
from ..tracer.trace_io import write_trace
from .report import RegressionReport, build_report, write_report
from .state import PipelineState, load_state, save_state

BASE = "BASE"
UPGRADED = "UPGRADED"


class Pipeline:
    def __init__(self, cfg: PipelineConfig, emit_cnf: bool = False):
        self.cfg = cfg
        self.output_dir = Path(cfg.output_dir)
        cnf_dir = self.output_dir / "cnf" if emit_cnf else None
        self.bmc = BmcConfig.from_pipeline(cfg, cnf_dir)
        self._units = {}

    def unit(self, version: str) -> AnalyzedUnit:
        if version not in self._units:
            sources = [parse_file(path) for path in self.cfg.source_files(version)]
            self._units[version] = analyze(sources)
        return self._units[version]

    def _manifest(self, path, suite):
        if path is None:
            return []
        return load_manifest(path, suite)

    # --- phases ----------------------------------------------------------

    def phase1_generate(self) -> PipelineState:
        """Detect the change, trace the base suite and infer dynamic properties."""
        tests = self._manifest(self.cfg.tests_base, Suite.BASE)
        if not tests:
            raise ConfigError(f"tests_base: '{self.cfg.tests_base}' lists no tests")
        self._manifest(self.cfg.tests_upgrade, Suite.UPGRADE)
        base, upgraded = self.unit(BASE), self.unit(UPGRADED)
        state = PipelineState(phase=1, change_set=diff(base, upgraded))
        try:
            state.scope = scope(state.change_set, base, upgraded)
        except EmptyChange as exc:
            log(str(exc), filter_tag="PHASE1")
            state.no_change = True
            return state
        trace = run_suite(base, tests, state.scope, BASE, self.cfg.bit_width, self.cfg.parallelism)
        write_trace(trace, self.output_dir / "base.trace")
        props = infer(trace, state.scope, self.cfg.min_support, self.cfg.bit_width, self.cfg.parallelism)
        state.properties = props
        write_properties(props, self.output_dir / "dynamic.props")
        log(f"{len(props)} dynamic properties", filter_tag="PHASE1")
        return state

    def phase2_true(self, state: PipelineState) -> PipelineState:
        """Keep only the dynamic properties the checker proves on the base version."""
        dynamic = state.with_status(PropertyStatus.DYNAMIC)
        iu = instrument(self.unit(BASE), dynamic)
        iu.write_sources(self.output_dir / "instrumented" / "base")
        verdicts = check_entries(iu, state.scope.entries_for(BASE), self.bmc)
        updated = []
        for prop in dynamic:
            verdict = verdicts.get(prop.label)
            if verdict is None:
                verdict = Verdict.unknown(UnknownReason.UNSUPPORTED, self.bmc.bounds())
            if verdict.kind is VerdictKind.VALID:
                updated.append(prop.transition(PropertyStatus.TRUE, verdict=verdict))
            elif verdict.kind is VerdictKind.VIOLATED:
                updated.append(prop.transition(PropertyStatus.FALSE, verdict.counterexample, verdict))
            else:
                updated.append(prop.transition(PropertyStatus.UNKNOWN, verdict=verdict))
        state.replace_properties(updated)
        state.phase = 2
        true_props = state.with_status(PropertyStatus.TRUE)
        write_properties(true_props, self.output_dir / "true.props")
        log(f"{len(true_props)} of {len(dynamic)} properties proved on the base version", filter_tag="PHASE2")
        return state

    def phase3_outdated(self, state: PipelineState) -> PipelineState:
        """Drop the true properties that the upgrade suite shows were changed on purpose."""
        upgraded = self.unit(UPGRADED)
        tests = self._manifest(self.cfg.tests_upgrade, Suite.UPGRADE)
        samples = {}
        if tests:
            trace = run_suite(upgraded, tests, state.scope, UPGRADED, self.cfg.bit_width, self.cfg.parallelism)
            write_trace(trace, self.output_dir / "upgraded.trace")
            for sample in trace.samples:
                samples.setdefault(sample.point, []).append(sample)
        updated = []
        for prop in state.with_status(PropertyStatus.TRUE):
            schema = upgraded.schema(prop.point)
            if schema is None or any(v not in schema.variables for v in prop.formula.variables):
                updated.append(prop.transition(PropertyStatus.UNMAPPABLE))
                continue
            offending = next(
                (s for s in samples.get(prop.point, []) if not holds(prop, s, self.cfg.bit_width)), None
            )
            if offending is None:
                updated.append(prop.transition(PropertyStatus.NON_REGRESSION))
            else:
                evidence = {
                    "test": offending.test,
                    "sequence": offending.sequence,
                    "point": str(offending.point),
                    "bindings": {v: offending.bindings[v] for v in prop.formula.variables},
                }
                updated.append(prop.transition(PropertyStatus.OUTDATED, evidence))
        state.replace_properties(updated)
        state.phase = 3
        non_regression = state.with_status(PropertyStatus.NON_REGRESSION)
        write_properties(non_regression, self.output_dir / "non_regression.props")
        log(
            f"{len(state.with_status(PropertyStatus.OUTDATED))} outdated, {len(non_regression)} non-regression",
            filter_tag="PHASE3",
        )
        return state

    def phase4_check(self, state: PipelineState) -> PipelineState:
        """Check the non-regression properties on the upgraded version."""
        candidates = state.with_status(PropertyStatus.NON_REGRESSION)
        iu = instrument(self.unit(UPGRADED), candidates)
        iu.write_sources(self.output_dir / "instrumented" / "upgraded")
        verdicts = check_entries(iu, state.scope.entries_for(UPGRADED), self.bmc)
        updated = []
        for prop in candidates:
            verdict = verdicts.get(prop.label) or Verdict.unknown(UnknownReason.UNSUPPORTED, self.bmc.bounds())
            if verdict.kind is VerdictKind.VIOLATED:
                updated.append(prop.transition(PropertyStatus.VIOLATED, verdict.counterexample, verdict))
            elif verdict.kind is VerdictKind.VALID:
                updated.append(prop.transition(PropertyStatus.PRESERVED, verdict=verdict))
            else:
                updated.append(prop.transition(PropertyStatus.UNCHECKED, verdict=verdict))
        state.replace_properties(updated)
        state.phase = 4
        log(f"{len(state.with_status(PropertyStatus.VIOLATED))} violation(s)", filter_tag="PHASE4")
        return state

    # --- composition -------------------------------------------------------

    def run(self, resume_from: int = 1) -> RegressionReport:
        if not 1 <= resume_from <= 4:
            raise ConfigError("resume_from must be between 1 and 4")
        self.output_dir.mkdir(parents=True, exist_ok=True)
        state = load_state(self.output_dir, resume_from - 1) if resume_from > 1 else None
        steps = {
            1: lambda s: self.phase1_generate(),
            2: self.phase2_true,
            3: self.phase3_outdated,
            4: self.phase4_check,
        }
        for phase in range(resume_from, 5):
            if state is not None and state.no_change:
                break
            try:
                state = steps[phase](state)
            except RegSentryError as exc:
                raise PipelineError(f"phase {phase}", exc) from exc
            save_state(state, self.output_dir)
        report = build_report(self, state)
        write_report(report, self.output_dir)
        return report


def run_all(cfg: PipelineConfig, resume_from: int = 1, emit_cnf: bool = False) -> RegressionReport:
    return Pipeline(cfg, emit_cnf).run(resume_from)
