"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all saext errors."""


class StructuralError(ToolkitError):
    """An input violates a structural precondition (non-Hermitian matrix,
    non-unitary parameter, singular boundary system, model mismatch)."""


class ConfigError(ToolkitError):
    """Invalid model or experiment configuration."""


class ContractError(ToolkitError):
    """A runtime contract was violated (argument outside the documented
    range, window too small, membership residual too large)."""


class DiagnosticError(ToolkitError):
    """A certified numerical property failed its tolerance."""
