"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
    2 -> configuration / usage errors
    3 -> numerical errors
    4 -> data errors
"""


class NonlocalLWRError(Exception):
    """Base class for all toolkit errors."""


# -- configuration / usage (exit code 2) -------------------------------------

class ConfigError(NonlocalLWRError):
    """Invalid or missing configuration."""


class DomainError(ConfigError):
    """An argument lies outside its admissible domain."""


class ResolutionError(ConfigError):
    """Grid resolution too coarse to represent the requested run."""


class UnsupportedError(ConfigError):
    """Operation not defined for the given family / mode."""


# -- numerical (exit code 3) --------------------------------------------------

class NumericalError(NonlocalLWRError):
    """Base class for numerical failures."""


class CFLError(NumericalError):
    """CFL number exceeds 1; the explicit scheme would be unstable."""


class NonFiniteError(NumericalError):
    """A NaN or infinity appeared where a finite value is required."""


class QuadratureError(NumericalError):
    """Adaptive quadrature failed to converge."""


class OutOfCollarError(NumericalError):
    """Nonlocal stencil access outside the available collar data."""


class DegenerateError(NumericalError):
    """Error metric undefined (zero reference mass on the region)."""


# -- data (exit code 4) --------------------------------------------------------

class DataError(NonlocalLWRError):
    """Base class for input-data failures."""


class ShapeError(DataError):
    """Array shapes inconsistent with the grid."""


class CoverageError(DataError):
    """Prescribed region not fully covered by the supplied data."""


class FormatError(DataError):
    """Input file missing required columns or unparseable."""


class EmptyWindowError(DataError):
    """No trajectory records fall inside the grid window."""
