"""Exception hierarchy shared by the codec layers."""


class GgecError(Exception):
    """Base class for library errors."""


class ConfigError(GgecError, ValueError):
    """Invalid alphabet, mode or configuration value."""


class EncodeError(GgecError, ValueError):
    """A symbol cannot be coded against its table."""


class DecodeError(GgecError, ValueError):
    """The payload is truncated or otherwise undecodable."""


class FormatError(GgecError, ValueError):
    """A file or container violates its binary layout."""


class DomainError(GgecError, ValueError):
    """A numeric query has no well-defined answer for its inputs."""
