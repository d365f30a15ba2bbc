"""Exception hierarchy shared by all modules."""


class ModArithError(ValueError):
    """Base class for every error raised by simdmod."""


class InvalidModulusError(ModArithError):
    """Modulus is below 2, even where oddness is required, or otherwise unusable."""


class ProfileViolationError(ModArithError):
    """Modulus is too wide for the requested word size, profile or float format."""


class RangeError(ModArithError):
    """An index or length argument is outside its allowed range."""


class UnsupportedTransformSizeError(ModArithError):
    """The requested transform length is not supported by the prime."""


class SizeOverflowError(ModArithError):
    """Operands exceed the capacity of the three-prime transform."""


class DimensionMismatchError(ModArithError):
    """Matrix or polynomial operands have incompatible shapes or moduli."""
