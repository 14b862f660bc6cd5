"""Exception types shared across the package."""


class SpecdescentError(Exception):
    """Base class for all library errors."""


class DomainError(SpecdescentError, ValueError):
    """An argument is outside the operation's domain."""


class SizeError(SpecdescentError, ValueError):
    """A requested allocation exceeds the configured element cap."""


class CapabilityError(SpecdescentError, ValueError):
    """The inputs cannot support the requested computation."""


class NumericalError(SpecdescentError, RuntimeError):
    """A numerical computation failed (overflow, breakdown)."""


class ConvergenceError(NumericalError):
    """An iterative routine hit its iteration cap.

    Carries the number of iterations performed in ``iterations``.
    """

    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations
