"""Exception hierarchy shared by every regsentry phase."""


class RegSentryError(Exception):
    pass


class ConfigError(RegSentryError):
    pass


class FrontendError(RegSentryError):
    pass


class ParseError(FrontendError):
    def __init__(self, line, column, expected, found=None):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        detail = f"expected {expected}"
        if found is not None:
            detail += f", found {found!r}"
        super().__init__(f"{line}:{column}: {detail}")


class SemanticError(FrontendError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class UnknownFunction(RegSentryError):
    pass


class EmptyChange(RegSentryError):
    """Both versions are identical: there is nothing to analyze."""


class RuntimeFault(RegSentryError):
    pass


class TraceFormatError(RegSentryError):
    def __init__(self, message, line):
        self.line = line
        super().__init__(f"line {line}: {message}")


class PointMismatch(RegSentryError):
    pass


class DepthExceeded(RegSentryError):
    pass


class LifecycleError(RegSentryError):
    pass


class PipelineError(RegSentryError):
    def __init__(self, phase, cause):
        self.phase = phase
        self.cause = cause
        super().__init__(f"{phase}: {cause}")


class AssertionViolation(RegSentryError):
    """A labelled harness assertion evaluated to false during interpretation."""

    def __init__(self, label, line=None):
        self.label = label
        self.line = line
        super().__init__(f"assertion {label} failed" + (f" at line {line}" if line else ""))


class AssumptionFailed(RegSentryError):
    pass


class PropertyFormatError(RegSentryError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
