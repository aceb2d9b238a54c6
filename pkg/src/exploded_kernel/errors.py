"""Exception hierarchy shared by all kernel modules.

Exit-code mapping used by the CLI: validation/domain/usage/data errors
exit 1, capability/computation errors exit 2.
"""


class ExplodedKernelError(Exception):
    """Base class for all kernel errors."""

    exit_code = 1


class UsageError(ExplodedKernelError):
    """Caller combined values or arguments in an unsupported way."""

    exit_code = 1


class DomainError(ExplodedKernelError):
    """Input lies outside the mathematical domain of the operation."""

    exit_code = 1


class ValidationError(ExplodedKernelError):
    """Structured input failed an integrity check."""

    exit_code = 1


class DataError(ExplodedKernelError):
    """Sampled data is missing, inconsistent, or not finite."""

    exit_code = 1


class CapabilityError(ExplodedKernelError):
    """Request exceeds the desk-scale caps this kernel supports."""

    exit_code = 2


class ComputationError(ExplodedKernelError):
    """A numeric procedure could not resolve an answer."""

    exit_code = 2


class ResolutionError(ComputationError):
    """Sampling too coarse to resolve a discrete quantity (e.g. winding)."""

    exit_code = 2
