"""Exception types shared across the package."""


class ClonewatchError(Exception):
    """Base class for all package errors."""


class MalformedUrl(ClonewatchError):
    """URL could not be parsed into a usable host."""


class Unreachable(ClonewatchError):
    """DNS or connection failure while fetching a site."""


class Forbidden(ClonewatchError):
    """The site root answered with a 4xx status."""


class ProfileError(ClonewatchError):
    """An extraction profile is missing required selectors or is unparseable."""


class ProfileMismatch(ClonewatchError):
    """Archive pages were fetched but the profile matched zero records.

    Signals that the profile needs adjustment, not that the journal is empty.
    """


class QuotaExhausted(ClonewatchError):
    """The search provider's daily request cap was hit; the run can resume later."""


class ProviderError(ClonewatchError):
    """The search provider failed after retries."""


class UnknownDomain(ClonewatchError):
    """A verdict was posted for a domain that is not a known candidate."""


class IllegalTransition(ClonewatchError):
    """A verdict transition outside the allowed set (without an override)."""


class UnknownRun(ClonewatchError):
    """No run with the requested id exists."""


class EmptyGraph(ClonewatchError):
    """Graph operation requested on a run with zero confirmed clones."""


class InfeasibleSpec(ClonewatchError):
    """Corpus spec parameters make the pairwise overlap guarantee impossible."""


class SchemaViolation(ClonewatchError):
    """A ledger event failed schema validation before append."""


class TornWrite(ClonewatchError):
    """A ledger line failed its checksum during replay."""


class StorageFull(ClonewatchError):
    """The cache backing store ran out of space."""


class CorruptEntry(ClonewatchError):
    """A cache entry failed its checksum; callers treat this as a miss."""
