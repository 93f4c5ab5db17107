"""Exception types shared across the package."""


class ClusterVecError(Exception):
    pass


class NotSkewSymmetrizable(ClusterVecError):
    pass


class NotSkewSymmetric(ClusterVecError):
    pass


class MatrixParseError(ClusterVecError):
    pass


class CapExceeded(ClusterVecError):
    """Raised when an enumeration hits its state cap before closing.

    ``partial`` holds whatever was collected (an atlas or a set of matrices)
    and ``depth`` the BFS depth reached.
    """

    def __init__(self, message, partial=None, depth=0):
        super().__init__(message)
        self.partial = partial
        self.depth = depth


class IncompleteAtlas(ClusterVecError):
    pass


class DisconnectedSupport(ClusterVecError):
    pass


class NotSignCoherent(ClusterVecError):
    pass


class NotAdmissible(ClusterVecError):
    pass


class RepresentativeDependent(ClusterVecError):
    pass


class SignConditionViolated(ClusterVecError):
    pass


class NotFoldedType(ClusterVecError):
    pass


class ArcNotInTriangulation(ClusterVecError):
    pass


class UnsupportedTagConfiguration(ClusterVecError):
    pass


class NotFound(ClusterVecError):
    pass
