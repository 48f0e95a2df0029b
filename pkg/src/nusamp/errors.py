"""Exception types shared across the toolkit."""


class DegenerateSignalError(ValueError):
    """The signal carries no usable derivative content (e.g. constant input)."""


class ResolutionError(ValueError):
    """A requested segment count exceeds what the input grid supports."""


class EncodingError(ValueError):
    """A descriptor cannot be represented with the given codec configuration."""


class DecodeError(ValueError):
    """A bitstream is malformed, truncated, or has the wrong magic/version."""
