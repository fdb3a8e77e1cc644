"""Exception hierarchy shared by all probclone modules."""


class ProbcloneError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ProbcloneError):
    """Operands have incompatible shapes."""


class SymmetryError(ProbcloneError):
    """A matrix required to be Hermitian is not, within tolerance."""


class ConvergenceError(ProbcloneError):
    """An iterative routine hit its iteration cap before converging."""


class NotPSDError(ProbcloneError):
    """A matrix required to be positive semidefinite has a negative eigenvalue.

    The offending eigenvalue is stored in ``min_eigenvalue``.
    """

    def __init__(self, min_eigenvalue, message=None):
        self.min_eigenvalue = float(min_eigenvalue)
        if message is None:
            message = "matrix is not positive semidefinite " \
                      "(eigenvalue %.6g)" % self.min_eigenvalue
        super().__init__(message)


class SingularError(ProbcloneError):
    """A matrix inverse was requested for a singular or ill-conditioned matrix."""


class DomainError(ProbcloneError):
    """A scalar argument lies outside its documented domain."""


class RankError(ProbcloneError):
    """A state family is linearly dependent where independence is required."""


class UnitarityError(ProbcloneError):
    """A matrix required to be unitary is not, within tolerance."""


class DegenerateError(ProbcloneError):
    """Two basis indices required to be distinct coincide."""


class ShapeError(ProbcloneError):
    """A matrix dimension is not the power of two a circuit requires."""


class SizeError(ProbcloneError):
    """A dense evaluation exceeds the supported wire count."""


class ModeError(ProbcloneError):
    """An operation was invoked for the wrong machine mode."""


class InvariantError(ProbcloneError):
    """An internal consistency check failed after construction."""
