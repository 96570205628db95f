"""Exception types shared across the toolkit."""


class SslAuthError(Exception):
    """Base class for toolkit errors."""


class ContainerError(SslAuthError):
    """Malformed, truncated, or unreadable container file."""


class TamperError(SslAuthError):
    """Stored digest, checksum, or fingerprint does not match the data."""


class BindingError(SslAuthError):
    """Artifacts that must refer to each other do not (wrong encoder, keys...)."""


class EntryNotFoundError(SslAuthError):
    """Registry entry or report id does not exist."""


class ChallengeError(SslAuthError):
    """Unknown, expired, or already-consumed verification challenge."""
