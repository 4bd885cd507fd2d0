"""RegSentry - regression fault detection between two versions of a MiniC program."""

__version__ = "1.0.0"
__all__ = ["bmc", "changes", "inference", "minic", "pipeline", "shared", "tracer"]
