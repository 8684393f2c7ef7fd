"""Exception hierarchy shared by all modules.

Two broad families matter for the command line tool: configuration or
input problems (exit code 2) and numerical failures such as a root or a
phase-matching ridge that does not exist in the searched range (exit
code 3).  Everything derives from ToolkitError so callers can catch one
base class.
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ToolkitError):
    """Invalid configuration file, section, or parameter combination."""


class InputError(ToolkitError):
    """Invalid argument to a library routine (usage error)."""


class NumericsError(ToolkitError):
    """A computation failed for numerical reasons (no root, empty support, ...)."""


# --- dispersion -----------------------------------------------------------

class OutOfRangeError(InputError):
    """Wavelength outside the validity range of a dispersion model."""


class MalformedTableError(InputError):
    """Tabulated index data unusable (too short, unsorted, non-finite)."""


# --- phase matching -------------------------------------------------------

class NoRootError(NumericsError):
    """No sign change found when bracketing a phase-matching root."""


class EmptySupportError(NumericsError):
    """Requested grid or spectrum carries no phase-matched amplitude."""


# --- joint spectra --------------------------------------------------------

class CwHasNoEnvelopeError(InputError):
    """Spectral envelope requested for a monochromatic pump."""


class NotNormalizedError(InputError):
    """Operation requires a unit-norm joint amplitude or unit-trace matrix."""


class NegativeIntensityError(InputError):
    """Intensity grid contains negative entries."""


class AxisMismatchError(InputError):
    """Two grids or matrices do not share a common wavelength axis."""


# --- interference ---------------------------------------------------------

class EmptyCurveError(InputError):
    """Interference curve has no samples."""


# --- tag simulation -------------------------------------------------------

class InvalidBrightnessError(InputError):
    """Mean pair number per pulse is negative or non-finite."""


# --- tag analysis ---------------------------------------------------------

class UnknownChannelError(InputError):
    """Channel name or id absent from a time-tag stream."""


class MissingTriggerError(InputError):
    """Trigger channel empty; pulse windows cannot be formed."""


class ZeroDispersionError(InputError):
    """Time-to-wavelength mapping requested with zero dispersion."""


class InsufficientSpanError(InputError):
    """Histogram does not cover the requested number of side peaks."""


class EmptySidePeaksError(NumericsError):
    """Side peaks hold zero counts; normalisation impossible."""


class ShapeMismatchError(InputError):
    """Two grids that should be congruent have different shapes."""
