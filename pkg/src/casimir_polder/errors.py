"""Exception hierarchy shared by the numerical modules and the CLI."""


class CasimirPolderError(Exception):
    """Base class for all package errors."""


class InvalidGeometryError(CasimirPolderError, ValueError):
    """Raised for geometries outside an operation's domain (rho <= R, phi on the sheet, ...)."""


class ConvergenceError(CasimirPolderError, RuntimeError):
    """A quadrature or series did not meet its tolerance.

    ``partial`` carries whatever was accumulated before giving up, so callers
    can inspect it instead of getting a silently wrong number.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
