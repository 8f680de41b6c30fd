"""Hard-coded numerical constants, kept in one place for auditing."""

# PSWF construction
TAIL_TOL = 1e-15            # trailing Legendre coefficients per mode
MAX_N = 2048
QL_MAX_ITER = 50            # implicit QL sweeps per eigenvalue

# prolate-Lobatto nodes
SCAN_FACTOR = 20            # scan points per mode for bracketing psi_N'
ROOT_FTOL = 1e-13           # |psi_N'| relative to max|psi_N'|
ROOT_XTOL = 1e-14
NEWTON_MAX = 50

# dense linear algebra
SINGULAR_RTOL = 1e-15       # pivot / max|A| below this is singular
HQR_ITER_FACTOR = 100       # total QR sweeps allowed per unit dimension
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
ILL_COND_LIMIT = 1e14
Q_ADMISSIBLE = 2.0 ** (-1.0 / 6.0)  # ~0.8909

# rational cardinal matrices
NODE_VALUE_RTOL = 1e-13

# BiCGStab
BICGSTAB_TOL = 1e-12

# Kong-Rokhlin bisection
KR_XTOL = 1e-10

# eigenvalue studies
EIG_ACCURATE = 1e-12
