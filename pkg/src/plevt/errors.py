"""Exception types shared across the package."""


class PlevtError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(PlevtError, ValueError):
    """Distribution parameters outside their admissible range."""


class DomainError(PlevtError, ValueError):
    """Function argument outside the documented domain."""


class NotEvaluableError(PlevtError, ArithmeticError):
    """Quantity degenerates (0/0) in floating point at the requested point."""


class FitInfeasibleError(PlevtError, ValueError):
    """Sample moments admit no valid (theta, beta) solution."""

    def __init__(self, m1: float, m2: float, message: str | None = None):
        self.m1 = m1
        self.m2 = m2
        super().__init__(
            message
            or f"no admissible parameters for sample moments m1={m1!r}, m2={m2!r} "
            f"(need 1.5 < m2/m1^2 < 2)"
        )


class DegenerateSampleError(PlevtError, ValueError):
    """Sample carries no usable information (e.g. all top spacings zero)."""


class CsvFormatError(PlevtError, ValueError):
    """Malformed numeric CSV input."""

    def __init__(self, path: str, line_no: int, content: str):
        self.path = path
        self.line_no = line_no
        self.content = content
        super().__init__(f"{path}:{line_no}: not a number: {content!r}")


class ExperimentRefusedError(PlevtError, RuntimeError):
    """Experiment preconditions violated; carries the diagnostic record."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)
