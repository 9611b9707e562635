"""Exception types raised across the package."""


class SizeError(ValueError):
    """A problem is too large for dense simulation or analysis."""


class DimensionError(ValueError):
    """Array lengths or shapes do not agree."""


class DegenerateGapError(ValueError):
    """The minimum spectral gap is zero, so no runtime bound exists."""


class InstanceFormatError(ValueError):
    """A serialized channel instance is malformed.

    ``field`` names the offending entry of the record.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
