"""Four-phase regression analysis and reporting."""

from .phases import Pipeline, run_all
from .report import EXIT_CLEAN, EXIT_ERROR, EXIT_VIOLATIONS, RegressionReport, build_report, write_report
from .state import PipelineState, load_state, save_state

__all__ = [
    "EXIT_CLEAN",
    "EXIT_ERROR",
    "EXIT_VIOLATIONS",
    "Pipeline",
    "PipelineState",
    "RegressionReport",
    "build_report",
    "load_state",
    "run_all",
    "save_state",
    "write_report",
]
