"""Utilities shared by every regsentry package."""

from . import errors
from .config import PipelineConfig, load_config, parse_config
from .logger import configure_logging, log

__all__ = [
    "errors",
    "PipelineConfig",
    "load_config",
    "parse_config",
    "configure_logging",
    "log",
]
