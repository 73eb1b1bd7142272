"""Exception hierarchy shared across the package."""


class SoftcspError(Exception):
    """Base class for all package-specific errors."""


class InvalidAssignmentError(SoftcspError):
    """Assignment length or a value is out of range for the instance."""


class EmptyDomainError(SoftcspError):
    """A domain restriction would leave a variable with no values."""


class NotCrispError(SoftcspError):
    """An operation requiring {0, inf}-valued binary costs saw a soft one."""


class TooLargeError(SoftcspError):
    """Search space exceeds the configured desk-scale budget."""


class UnsupportedPatternError(SoftcspError):
    """Pattern exceeds the size the exhaustive matcher supports."""


class CertificationError(SoftcspError):
    """A supplied arc is not functional in the required direction."""


class JwpPreconditionError(SoftcspError):
    """Input claimed to satisfy the joint-winner property does not."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class StructureViolatedError(SoftcspError):
    """A cost-level component is not an assignment-clique; preconditions broken."""


class InfeasibleError(SoftcspError):
    """No finite-cost assignment can exist (e.g. a variable lost all values)."""


class OracleInconsistencyError(SoftcspError):
    """A caller-supplied callback returned a provably wrong answer."""


class InternalConsistencyError(SoftcspError):
    """A cross-check between two internal computations failed."""


class MalformedNetworkError(SoftcspError):
    """Flow network violates its structural invariants (e.g. demand > capacity)."""


class InvalidInstanceError(SoftcspError):
    """Instance fails the structural validation required by a solver."""


class InvalidFamilyError(SoftcspError):
    """A set family that must be non-overlapping is not."""


class ParseError(SoftcspError):
    """Instance file could not be parsed."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
