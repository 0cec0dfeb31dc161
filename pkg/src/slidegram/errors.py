"""Exception hierarchy shared across the package."""


class SlidegramError(Exception):
    """Base class for all package errors."""


class PackError(SlidegramError):
    """Malformed exercise pack (schema violation, duplicate ids, bad indices)."""


class CapacityError(SlidegramError):
    """Solution-space size exceeds the enumeration cap for an exercise."""


class InvalidVectorError(SlidegramError):
    """State vector has the wrong length or an out-of-range position."""


class NoSolutionError(SlidegramError):
    """Operation requires a non-empty gold set."""


class NotAMoveError(SlidegramError):
    """Two vectors do not differ in exactly one position."""


class SequencingError(SlidegramError):
    """Event delivered out of session order."""


class EmptySelectionError(SlidegramError):
    """Aggregation filter left no trajectories."""


class InconsistentSessionError(SlidegramError):
    """Session failed the ingest replay audit; carries the audit report."""

    def __init__(self, session_id: str, audit: tuple):
        self.session_id = session_id
        self.audit = tuple(audit)
        super().__init__(f"session {session_id} failed replay audit: {'; '.join(audit)}")
