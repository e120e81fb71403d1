"""Exception types raised by atdress."""


class InvalidArgument(ValueError):
    """An argument is malformed or outside its allowed range."""


class SchemeError(ValueError):
    """The level configuration cannot form the four-state scheme."""


class PoleError(ArithmeticError):
    """A Green function was evaluated exactly on one of its poles."""


class NotFoundError(RuntimeError):
    """A search (minimum, peak) found nothing inside its window."""


class WindowTooSmallError(RuntimeError):
    """The propagated pulse reaches the edge of its time window."""
