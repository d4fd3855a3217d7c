"""Exception hierarchy shared by the library and the command line."""


class DilacovError(Exception):
    """Base class for every error raised by this package."""

    exit_status = 1


class FormatError(DilacovError, ValueError):
    """Malformed literal or file contents."""


class DomainError(DilacovError, ValueError):
    """An operation was called outside of its mathematical domain."""


class ValidationError(DomainError):
    """A structure violates one or more of its axioms.

    ``violations`` holds one human readable line per broken axiom, each
    naming the offending cell index where there is one.
    """

    def __init__(self, what, violations):
        self.violations = list(violations)
        super().__init__(f"invalid {what}: " + "; ".join(self.violations))


class ResourceLimitError(DilacovError):
    """A configured size bound would be exceeded."""

    exit_status = 2


class CertificationError(DilacovError):
    """An internal invariant failed to hold; ``axiom`` names it."""

    exit_status = 3

    def __init__(self, axiom, detail=""):
        self.axiom = axiom
        msg = f"certification failed: {axiom}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
