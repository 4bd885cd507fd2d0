from .detector import SCOPE_POLICY, AnalysisScope, ChangeSet, diff, scope

__all__ = ["SCOPE_POLICY", "AnalysisScope", "ChangeSet", "diff", "scope"]
