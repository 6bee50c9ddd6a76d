"""Exception types shared across the package.

Every raised condition maps to one of these so the CLI can translate
failures into stable exit codes (see cli.EXIT_*).
"""


class UsageError(ValueError):
    """Invalid argument, malformed config, or an out-of-contract call."""


class ResourceError(RuntimeError):
    """A computation was refused because it would exceed a size cap."""


class DegenerateMeasureError(ArithmeticError):
    """The normalization constant vanishes, so the measure is undefined."""


class UnsupportedClassError(RuntimeError):
    """Asymptotic estimate requested for weights outside the supported
    singularity classes (zero radius, infinite radius, or unclassified)."""


class ConvergenceError(RuntimeError):
    """A numerical sum or quadrature failed its convergence test."""


class GammaPoleError(ArithmeticError):
    """Gamma evaluated at a nonpositive integer."""
