"""Exception types raised across the package."""


class WvgError(Exception):
    """Base class for every domain error this package raises."""


class InvalidGameError(WvgError):
    """A game violates a construction invariant or cannot be parsed."""


class InvalidCoalitionError(WvgError):
    """A coalition references unknown players or breaks a precondition."""


class InvalidSplitError(WvgError):
    """A split specification is inconsistent with the target player."""


class InvalidMergeError(WvgError):
    """A merge specification is empty or self-referential."""


class SizeLimitError(WvgError):
    """Enumeration was requested above the player limit; use the DP engine."""


class InvalidConfigError(WvgError):
    """Sampling or experiment parameters are out of range."""


class DegenerateNormalizationError(WvgError):
    """Every raw estimate was zero; increase samples or use the exact engine."""


class ResourceLimitError(WvgError):
    """An exact computation would exceed the configured ceiling."""


class BoundViolationError(WvgError):
    """A proven bound failed on concrete data; this always indicates a bug."""
