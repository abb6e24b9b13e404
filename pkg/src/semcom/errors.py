"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems (bad documents,
bad arguments, impossible scenario definitions) exit with 2, runtime failures
(unsatisfiable link budgets, solver breakdowns, I/O) with 3.
"""


class SemcomError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(SemcomError, ValueError):
    """Invalid configuration document, CLI argument, or constructor input."""


class DomainError(SemcomError, ValueError):
    """Numeric argument outside a function's mathematical domain."""


class EncodingError(SemcomError, ValueError):
    """Feature payload cannot be quantized (non-finite entries and the like)."""


class UnitsError(SemcomError, ValueError):
    """Feature-space and quantized-space quantities mixed in one call."""


class DegenerateModelError(SemcomError, ValueError):
    """Model geometry collapses (coincident centroids, zero separation)."""


class ConvergenceError(SemcomError, ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class LinkBudgetError(SemcomError, RuntimeError):
    """No feasible blocklength/configuration for the requested link target."""


class GraphLookupError(SemcomError, LookupError):
    """Reference to a vertex or label that does not exist in the graph."""
