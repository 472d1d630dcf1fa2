"""Exception hierarchy shared by all tubal modules."""


class TubalError(Exception):
    """Base class for every error raised by this package."""


class SingularTransform(TubalError):
    pass


class InvalidRowStructure(TubalError):
    """A row of M is neither real nor uniquely conjugate-paired.

    Products under such an M leave the reals.
    """


class ResidualImaginary(TubalError):
    """A result that must be real carries a non-negligible imaginary part."""


class ParityMismatch(TubalError):
    pass


class BadDimension(TubalError):
    pass


class DuplicateRoots(TubalError):
    pass


class ShapeMismatch(TubalError):
    pass


class SpecMismatch(TubalError):
    """Transform-domain data produced under a different TransformSpec."""


class SvdNoConvergence(TubalError):
    pass


class RankOutOfRange(TubalError):
    pass


class NotScaledUnitary(TubalError):
    """Closed-form truncation errors are only valid when M = cW, W unitary."""


class NotDiagonalizable(TubalError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class ResidualTooLarge(TubalError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class TensorFileError(TubalError):
    """Malformed or truncated tensor file."""
