"""Bounded model checking of property assertions."""

from .checker import (
    Counterexample,
    CounterexampleStep,
    UnknownReason,
    VerificationCondition,
    Verdict,
    VerdictKind,
    build_vc,
    check,
    check_entries,
    decode_counterexample,
    replay,
    solve,
)
from .config import BmcConfig
from .dimacs import CNF, parse_dimacs, read_dimacs, write_dimacs
from .encoder import Encoding, encode
from .instrument import InstrumentedUnit, instrument, strip_instrumentation
from .sat import SatStatus, SolveResult, solve_cnf

__all__ = [
    "BmcConfig",
    "CNF",
    "Counterexample",
    "CounterexampleStep",
    "Encoding",
    "InstrumentedUnit",
    "SatStatus",
    "SolveResult",
    "UnknownReason",
    "VerificationCondition",
    "Verdict",
    "VerdictKind",
    "build_vc",
    "check",
    "check_entries",
    "decode_counterexample",
    "encode",
    "instrument",
    "parse_dimacs",
    "read_dimacs",
    "replay",
    "solve",
    "solve_cnf",
    "strip_instrumentation",
    "write_dimacs",
]
