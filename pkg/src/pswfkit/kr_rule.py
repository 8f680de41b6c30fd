"""Approximate Kong-Rokhlin rule for pairing the bandwidth ``c`` with ``N``.

The exact rule picks the smallest ``N`` with ``lambda_N(c) <= eps``. Here
``lambda_N`` is replaced by the closed-form estimate

    nu_N(c) = sqrt(pi e / 2) (e c / 4)^N (N + 1/2)^-(N + 1/2) e^(1 / (6N)),

and ``N_*`` is the floor of the root of ``F(x) = log nu_x(c) - log eps``.
"""

import math
from dataclasses import dataclass

from . import tolerances as tol
from .errors import InvalidArgumentError, NoRootError

_HALF_LOG_PIE2 = 0.5 * math.log(math.pi * math.e / 2.0)


@dataclass(frozen=True)
class KrPair:
    c: float
    epsilon: float
    n_star: int
    nu_at_n_star: float
    x_root: float

    def q(self):
        """``c / sqrt(chi_{N*})``, computed from a freshly built basis."""
        from .core import build_basis

        basis = build_basis(self.c, self.n_star)
        return self.c / math.sqrt(basis.chi[-1])


def log_nu(c, n):
    return (_HALF_LOG_PIE2 + n * math.log(math.e * c / 4.0)
            - (n + 0.5) * math.log(n + 0.5) + 1.0 / (6.0 * n))


def nu(c, n):
    """The estimate ``nu_n(c)`` of ``lambda_n(c)``; 0 on underflow."""
    if c <= 0 or n < 1:
        raise InvalidArgumentError("nu requires c > 0 and n >= 1")
    lg = log_nu(c, n)
    return math.exp(lg) if lg > -745.0 else 0.0


def _bisect(f, lo, hi, xtol):
    f_lo = f(lo)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stationary_point(c):
    """Abscissa of the maximum of ``F``, or ``None`` if ``F`` is monotone.

    Solves ``log(c/4) = log(x + 1/2) + 1/(6x^2)`` on the branch where the
    right-hand side increases.
    """
    def g(x):
        return math.log(c / 4.0) - math.log(x + 0.5) - 1.0 / (6.0 * x * x)

    # g peaks where 3x^3 = x + 1/2
    x_peak = _bisect(lambda x: 3.0 * x ** 3 - x - 0.5, 0.1, 2.0, 1e-14)
    if g(x_peak) <= 0.0:
        return None
    hi = max(2.0 * x_peak, c / 4.0 + 1.0)
    return _bisect(g, x_peak, hi, 1e-12)


def select_n(c, epsilon=1e-14):
    """Smallest admissible ``N`` under the approximate rule.

    Raises
    ------
    NoRootError
        If ``F`` is already negative at the left end of the bracket, i.e.
        ``epsilon`` is too large for this ``c``.
    """
    if not c > 0 or not math.isfinite(c):
        raise InvalidArgumentError("c must be positive")
    if not 1e-16 <= epsilon <= 1e-1:
        raise InvalidArgumentError("epsilon must lie in [1e-16, 1e-1]")
    log_eps = math.log(epsilon)

    def F(x):
        return log_nu(c, x) - log_eps

    xs = stationary_point(c)
    lo = 1.0 if xs is None else max(1.0, xs)
    if F(lo) < 0.0:
        raise NoRootError(f"F(x; c={c}) < 0 at x = {lo}: epsilon too large")
    hi = 2.0 * lo
    while F(hi) >= 0.0:
        hi *= 2.0
    root = _bisect(F, lo, hi, tol.KR_XTOL)
    n_star = max(1, math.floor(root))
    return KrPair(float(c), float(epsilon), n_star, nu(c, n_star), root)


def transition_bandwidth(N):
    """``c_*(N) = (pi/2)(N + 1/2)``."""
    if N < 1:
        raise InvalidArgumentError("N must be >= 1")
    return 0.5 * math.pi * (N + 0.5)
