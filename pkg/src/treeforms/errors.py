"""Shared exception types."""


class TreeformsError(Exception):
    """Base class for all library errors."""


class ResourceLimitError(TreeformsError):
    """A computation exceeded a configured size cap."""


class TreeSyntaxError(TreeformsError, ValueError):
    """Malformed tree text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position
