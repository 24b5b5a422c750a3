"""Exception hierarchy.  The CLI maps each class to an exit status."""


class ArtifactError(Exception):
    exit_code = 2
    kind = "error"


class InputError(ArtifactError, ValueError):
    """Malformed or mathematically invalid input data."""

    exit_code = 1
    kind = "input"


class InvariantViolation(ArtifactError):
    """A checked identity or invariant failed on valid input."""

    exit_code = 2
    kind = "invariant"


class ConsistencyError(ArtifactError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 2
    kind = "consistency"
