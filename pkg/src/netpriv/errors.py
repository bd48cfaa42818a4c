"""Exception hierarchy shared across the package."""


class NetprivError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(NetprivError):
    """Matrix shapes are inconsistent with the requested operation."""


class NotDiagonalizable(NetprivError):
    """The state matrix has an eigenvalue whose eigenvectors do not span
    its algebraic multiplicity; the rank criterion does not apply."""


class MultiplicityBoundExceeded(NetprivError):
    """An eigenvalue's geometric multiplicity exceeds the configured cap."""


class ZeroFunctional(NetprivError):
    """A privacy functional row is identically zero."""


class RankDeficient(NetprivError):
    """An exact-arithmetic input lacks the required full column rank."""


class EmptyRank(NetprivError):
    """An eigenbasis restricted to the accessible rows is already zero."""


class TooLarge(NetprivError):
    """The instance exceeds the brute-force size guard."""


class CertificationFailed(NetprivError):
    """A solver's result failed its own independent recheck; this indicates
    a tolerance boundary case or an internal bug, never normal operation."""


class ParseError(NetprivError):
    """An input file or option string could not be parsed."""


class IndexOutOfRange(NetprivError):
    """A 1-based node index in a privacy spec is outside 1..n."""


class EmptyCluster(NetprivError):
    """A cluster-average privacy spec contains an empty cluster."""
