"""Exception types raised by the kernel."""


class NilmatError(Exception):
    """Base class for all library errors."""


class EvenModulusError(NilmatError):
    """Raised for Z/m with m even: 2 would not be cancellable."""


class NotANilpotentRingError(NilmatError):
    pass


class IndexOutOfRangeError(NilmatError):
    pass


class CapExceededError(NilmatError):
    """A size or degree cap was exceeded."""


class ShapeMismatchError(NilmatError):
    pass


class ParseError(NilmatError, ValueError):
    pass


class RingMismatchError(NilmatError):
    """Operands live in different rings."""
