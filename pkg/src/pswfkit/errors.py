"""Exception types raised across the package."""


class PswfError(Exception):
    """Base class for all pswfkit errors."""


class InvalidArgumentError(PswfError, ValueError):
    pass


class TruncationError(PswfError):
    """Legendre truncation could not resolve the requested modes."""


class RootCountError(PswfError):
    """Bracketing found the wrong number of sign changes."""


class NoRootError(PswfError):
    pass


class SingularMatrixError(PswfError):
    """Matrix is singular to working precision."""


class IllConditionedError(SingularMatrixError):
    """Interpolation matrix too ill-conditioned; ``q`` is c/sqrt(chi_N)."""

    def __init__(self, msg, q=None, cond=None):
        super().__init__(msg)
        self.q = q
        self.cond = cond


class ConvergenceError(PswfError):
    pass
