"""Exception types for the figure renderer."""


class PlotsError(Exception):
    """Base class for everything this package raises on purpose."""


class SpecError(PlotsError):
    """A plot spec (or the spec file itself) is malformed."""


class HeaderMismatchError(PlotsError):
    """A CSV does not carry the experiment or columns the figure kind needs."""
