"""Exception hierarchy shared by all modules.

Three failure kinds matter to callers (and map to CLI exit codes):
input/structure problems (ValidationError, exit 1), negative decisions
carrying a witness (NotCircularError, exit 2) and resource caps
(ResourceCapError, exit 3).
"""


class SplitnestError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SplitnestError, ValueError):
    """Malformed input or violated structural precondition."""


class NetworkInvariantError(ValidationError):
    """A graph fails the phylogenetic-network invariants.

    `reason` is a stable machine-readable code, e.g. "degree", "cycle-length",
    "leaf-labeling", "not-connected", "not-simple-graph", "not-1-nested".
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class NotCircularError(SplitnestError):
    """A split system required to be circular is not; carries a witness.

    The witness is a short human-readable description of the obstruction
    (a failed component, an incompatible pair, or a non-interval split).
    """

    def __init__(self, message: str, witness: str = ""):
        super().__init__(message)
        self.witness = witness


class ResourceCapError(SplitnestError):
    """A configured size cap was exceeded; carries partial statistics."""

    def __init__(self, message: str, **stats):
        super().__init__(message)
        self.stats = dict(stats)
