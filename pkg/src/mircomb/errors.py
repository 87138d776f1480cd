"""Exception hierarchy shared by all modules.

Three failure classes matter to callers (and map onto CLI exit codes):
configuration problems, physical-domain problems (e.g. a requested
interaction that cannot be phase matched), and numerical-guard aborts
(aliasing, NaN, step budget). Construction-time invariant violations on
plain value types raise ValueError as usual.
"""


class MircombError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MircombError):
    """Bad or inconsistent run configuration (CLI exit code 2)."""


class PhysicsError(MircombError):
    """Physically invalid request, e.g. not phase-matchable (exit code 3)."""


class NumericsError(MircombError):
    """Numerical guard tripped: aliasing, NaN, step cap (exit code 4)."""
