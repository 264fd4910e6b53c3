"""Exception hierarchy.

Two families matter to callers. ``InvalidInputError`` means the request itself
is malformed. ``CannotCertifyError`` means the inputs are well formed but no
witness could be produced at the current tolerance; it is *not* a claim that
the opposite holds.
"""


class SimplexCertError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SimplexCertError, ValueError):
    pass


class DimensionError(InvalidInputError):
    pass


class CannotCertifyError(SimplexCertError):
    pass


class DegeneracyError(CannotCertifyError):
    """Affine/linear independence could not be certified."""


class NotCertifiableError(CannotCertifyError):
    """A pivot, coefficient or determinant sits too close to its threshold."""


class NoCertificateError(CannotCertifyError):
    """The query point is not certifiably in the required region."""


class ResourceError(SimplexCertError):
    """A construction would exceed its configured budget.

    ``required`` carries the size that would have been needed.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required
