"""Exception types raised across the package."""


class JumptileError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""

    code = "JumptileError"

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    def as_dict(self) -> dict:
        return {"error": self.code, "message": self.message}


class InvalidParams(JumptileError):
    code = "InvalidParams"


class NotExpanding(InvalidParams):
    code = "NotExpanding"


class DeterminantTooSmall(InvalidParams):
    code = "DeterminantTooSmall"


class BadJump(InvalidParams):
    code = "BadJump"


class TailNotConverged(JumptileError):
    code = "TailNotConverged"


class BadDigit(JumptileError):
    code = "BadDigit"


class BoxTooLarge(JumptileError):
    code = "BoxTooLarge"


class SingularPeriodMatrix(JumptileError):
    code = "SingularPeriodMatrix"


class TheoremOutOfScope(JumptileError):
    code = "TheoremOutOfScope"


class PointBudgetExceeded(JumptileError):
    code = "PointBudgetExceeded"


class InvalidRaster(JumptileError):
    code = "InvalidRaster"
