"""Custom exceptions."""


class SASError(Exception):
    """Base exception for the toolkit."""
    pass


class ConfigurationError(SASError):
    """Configuration error."""
    pass


class ValidationError(SASError):
    """Invalid matrix, state, spectrum or user input."""
    pass


class DomainError(ValidationError):
    """Argument outside the domain where a closed form is defined."""
    pass


class ConvergenceError(SASError):
    """Iterative eigensolver did not converge."""
    pass


class OrbitSearchError(SASError):
    """Orbit search misuse, such as an objective that does not fit the state."""
    pass


class VerificationError(SASError):
    """Unknown verification suite or scale."""
    pass
