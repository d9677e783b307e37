"""Shared exception types."""


class ConfigurationError(ValueError):
    """Invalid model or sweep configuration, detected before any computation."""


class CapabilityError(RuntimeError):
    """A solver was asked for something outside its validity range."""


class SolverError(RuntimeError):
    """An eigensolver failed to converge; carries residual diagnostics."""


class NumericalIntegrityError(RuntimeError):
    """An intermediate quantity violates a physical bound beyond float noise."""
