"""Exception hierarchy shared by every module.

Each error carries a short ``rule`` naming the computation step that
rejected the input, so the command line can report where things failed.
"""


class QOZetaError(Exception):
    """Base class for all errors raised by the package."""

    rule = "general"

    def __init__(self, message: str, rule: str | None = None):
        super().__init__(message)
        if rule is not None:
            self.rule = rule


class InvalidInput(QOZetaError):
    rule = "input validation"


class ParseError(InvalidInput):
    rule = "polynomial grammar"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotSquarefree(QOZetaError):
    rule = "discriminant"


class NotQuasiOrdinary(QOZetaError):
    rule = "quasi-ordinary test"


class NonTerminatingNormalization(QOZetaError):
    rule = "good coordinates"


class NotMonotonePath(QOZetaError):
    rule = "good coordinates"


class InvalidRoot(QOZetaError):
    rule = "Newton map"


class InvalidCone(QOZetaError):
    rule = "simplicial cone"


class DimensionGuard(QOZetaError):
    rule = "face fan"


class DegenerateInput(QOZetaError):
    rule = "non-degeneracy"


class UnsupportedDegenerateMotivic(QOZetaError):
    rule = "motivic recursion"


class SpecializationPole(QOZetaError):
    rule = "Euler characteristic specialization"


class UnsupportedMonodromy(QOZetaError):
    rule = "monodromy zeta"


class InvariantViolation(QOZetaError):
    """An internal cross-check failed; this indicates a bug, not bad input."""

    rule = "internal invariant"
