"""Error types shared across the package.

Everything user-facing derives from FusetrackError so the service and CLI
can map domain failures to one error class (HTTP 400 / exit code 2).
"""


class FusetrackError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(FusetrackError):
    """Malformed or out-of-contract input to a core operation."""


class InvalidRegionError(InvalidInputError):
    """Degenerate crop region (width or height below one pixel)."""


class ConfigError(FusetrackError):
    """Bad tracker configuration value or unknown configuration key."""


class TableLoadError(FusetrackError):
    """Color-names table file is missing or malformed."""


class SequenceError(FusetrackError):
    """Sequence directory, ground-truth file, or results file is unusable."""


class SynthSpecError(FusetrackError):
    """Synthetic sequence specification is inconsistent or unrenderable."""
