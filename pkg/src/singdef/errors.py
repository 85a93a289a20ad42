"""Exception types shared across the package.

Every domain failure raises a subclass of SingdefError so the CLI can map
them to exit code 2 uniformly. Usage errors stay plain ValueError/TypeError.
"""


class SingdefError(Exception):
    """Base class for domain errors."""


class NotWahl(SingdefError):
    """Chain is not the resolution chain of a Wahl singularity."""


class NotEndMarked(SingdefError):
    """Usual flip requires the marked curve at an end of the chain."""


class NonPositiveDelta(SingdefError):
    """Extremal neighborhood invariant delta must be positive."""


class NotFlipping(SingdefError):
    """Neighborhood is divisorial, there is no flip."""


class NotInitial(SingdefError):
    """Mori sequence generation starts from an initial neighborhood."""


class NonIntegralBeta(SingdefError):
    """Degeneration coefficient failed to be a positive integer."""


class InternalInconsistency(SingdefError):
    """A certified identity failed; indicates a bug or invalid input."""


class BlowDownMismatch(SingdefError):
    """Candidate resolution does not blow down to the requested target."""


class DepthBoundTooSmall(SingdefError):
    """Enumeration exhausted its blow-up budget before completing."""


class SingularSystem(SingdefError):
    """Discrepancy system is singular (graph not contractible)."""


class DimensionMismatch(SingdefError):
    """Matrix dimensions do not match the decorated curve data."""


class MissingBranchAssignment(SingdefError):
    """Weighted difference map needs a branch assignment."""


class NotInKX(SingdefError):
    """Computed k-sequence is not an admissible member of K(X)."""


class IncompatibleResolution(SingdefError):
    """M-resolution does not match the sandwiched structure."""


class NotContractible(SingdefError):
    """Vertex cannot be contracted (wrong self-intersection or kind)."""


class OutOfCatalog(SingdefError):
    """Curve configuration move is outside the supported flip catalog."""


class NonTerminating(SingdefError):
    """Runner exceeded its step budget."""


class ConditionViolated(SingdefError):
    """Family existence condition fails for these parameters."""


class MismatchReport(SingdefError):
    """Cross-check between enumeration and classification failed."""
