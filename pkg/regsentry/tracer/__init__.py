"""Test execution and trace collection."""

from .interpreter import Interpreter, TraceSample, c_div, c_rem, wrap
from .runner import Suite, TestCase, load_harness, load_manifest, run_suite, run_test
from .trace_io import TraceLog, format_trace, merge_logs, parse_trace, read_trace, write_trace

__all__ = [
    "Interpreter",
    "Suite",
    "TestCase",
    "TraceLog",
    "TraceSample",
    "c_div",
    "c_rem",
    "format_trace",
    "load_harness",
    "load_manifest",
    "merge_logs",
    "parse_trace",
    "read_trace",
    "run_suite",
    "run_test",
    "wrap",
]
