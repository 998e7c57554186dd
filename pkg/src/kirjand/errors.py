"""Exception hierarchy shared across the package.

Each branch maps onto a process exit code so the CLI can translate
failures uniformly: validation problems exit 1, transport/budget
problems exit 2, violated internal invariants exit 3.
"""


class KirjandError(Exception):
    """Base class for all package-specific errors."""

    exit_code = 1


class ValidationError(KirjandError):
    """Bad input data or configuration supplied by the caller."""

    exit_code = 1


class CorpusError(ValidationError):
    pass


class ConlluError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class TransportError(KirjandError):
    """A remote call failed after exhausting retries."""

    exit_code = 2


class BudgetExceededError(TransportError):
    """Estimated or accumulated spend crossed the configured ceiling."""

    exit_code = 2


class InvariantError(KirjandError):
    """An internal consistency check failed; results must not be trusted."""

    exit_code = 3
