"""Exception hierarchy and the process exit codes mapped to it."""

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SCHEMA = 2
EXIT_IMPOSSIBLE_EVIDENCE = 3
EXIT_ENUMERATION_CAP = 4


class MixlrError(Exception):
    """Base class for every domain error raised by this package."""

    exit_code = EXIT_FAILURE


class SchemaError(MixlrError):
    """A scenario document or structured input violates the published schema."""

    exit_code = EXIT_SCHEMA

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ValidationError(MixlrError):
    """An argument violates an operation's contract."""

    exit_code = EXIT_SCHEMA


class HypothesisOverlap(ValidationError):
    """The two hypothesis events share outcomes; they must be disjoint."""


class ImpossibleEvidence(MixlrError):
    """The evidence has probability zero under the model in use."""

    exit_code = EXIT_IMPOSSIBLE_EVIDENCE


class ConditioningOnNull(MixlrError):
    """Attempted to condition on an event of probability zero."""

    exit_code = EXIT_IMPOSSIBLE_EVIDENCE


class IndeterminateLikelihoodRatio(MixlrError):
    """The evidence is impossible under both hypotheses, so no ratio exists."""

    exit_code = EXIT_IMPOSSIBLE_EVIDENCE


class EnumerationTooLarge(MixlrError):
    """An exact enumeration would exceed the configured combination cap."""

    exit_code = EXIT_ENUMERATION_CAP

    def __init__(self, message: str, count: int | None = None) -> None:
        self.count = count
        super().__init__(message)


class InconclusiveSampling(UserWarning):
    """The Monte Carlo conditioning event was never hit; no estimate exists."""
