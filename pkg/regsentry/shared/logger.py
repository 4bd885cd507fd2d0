import logging
import sys

_logger = logging.getLogger("regsentry")


class _StderrHandler(logging.StreamHandler):
    """Writes to the current `sys.stderr`, so redirections made after setup are honoured."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def configure_logging(level="INFO"):
    """Route regsentry logs to stderr at the given level."""
    if not _logger.handlers:
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("%(message)s"))
        _logger.addHandler(handler)
        _logger.propagate = False
    _logger.setLevel(level.upper() if isinstance(level, str) else level)


def log(message, filter_tag="REGSENTRY", level=logging.INFO):
    _logger.log(level, f"{filter_tag} : {message}")
