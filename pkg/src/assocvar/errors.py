"""Exception hierarchy shared by all assocvar modules.

Every error carries a short machine-readable ``code`` so the CLI can emit
structured JSON failures, and an optional ``witness`` (a printable object
that demonstrates the failure, e.g. a relation that does not vanish).
"""

from __future__ import annotations


class AssocVarError(Exception):
    code = "error"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(AssocVarError):
    code = "parse"

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line}" + (f", col {col}" if col is not None else "") + f": {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class FieldError(AssocVarError):
    code = "field"


class AmbientMismatch(AssocVarError):
    """Operands live over different generator lists or fields."""

    code = "ambient-mismatch"


class TruncationError(AssocVarError):
    """A computation needs degrees beyond the presentation bound."""

    code = "truncation"


class CompletionBudget(AssocVarError):
    """Completion exceeded its rule/iteration budget."""

    code = "completion-budget"


class GuardExceeded(AssocVarError):
    """A brute-force search space is larger than the configured guard."""

    code = "guard"


class InvalidHom(AssocVarError):
    code = "invalid-hom"


class InvalidModule(AssocVarError):
    code = "invalid-module"


class SingularityError(AssocVarError):
    """Rank-deficient constraint Jacobian (projection near a singular point)."""

    code = "singular"


class ProjectionError(AssocVarError):
    """Newton projection onto the chart did not converge."""

    code = "projection"
