import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pswfkit import SingularMatrixError, linalg
from pswfkit.errors import InvalidArgumentError


def _rand(seed, n, shift=0.0):
    return np.random.default_rng(seed).standard_normal((n, n)) + shift * np.eye(n)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 40))
def test_lu_solve_matches_numpy(backend, seed, n):
    A = _rand(seed, n, shift=n)
    B = np.random.default_rng(seed + 1).standard_normal((n, 3))
    X = linalg.LUFactor(A, backend=backend).solve(B)
    assert np.allclose(X, np.linalg.solve(A, B), rtol=1e-10, atol=1e-12)


def test_lu_complex_and_vector(backend):
    rng = np.random.default_rng(3)
    A = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    b = rng.standard_normal(12)
    x = linalg.lu_solve(A, b, backend=backend)
    assert x.shape == (12,)
    assert np.allclose(A @ x, b, atol=1e-12)


def test_lu_singular(backend):
    A = np.ones((4, 4))
    with pytest.raises(SingularMatrixError):
        linalg.LUFactor(A, backend=backend)


def test_rejects_bad_shapes():
    with pytest.raises(InvalidArgumentError):
        linalg.LUFactor(np.ones((2, 3)))
    with pytest.raises(InvalidArgumentError):
        linalg.dense_eig(np.array([[np.nan]]))


@given(seed=st.integers(0, 10**6), n=st.integers(2, 60))
def test_tridiagonal_eigenpairs(backend, seed, n):
    rng = np.random.default_rng(seed)
    d, e = rng.standard_normal(n), rng.standard_normal(n - 1)
    w, Z = linalg.tridiag_eig(d, e, backend=backend)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(w, np.linalg.eigvalsh(T), atol=1e-12)
    assert np.allclose(T @ Z, Z * w, atol=1e-11)
    assert np.allclose(Z.T @ Z, np.eye(n), atol=1e-12)


@given(seed=st.integers(0, 10**6), n=st.integers(1, 50), balance=st.booleans())
def test_dense_eig_matches_numpy(backend, seed, n, balance):
    A = _rand(seed, n)
    got = np.sort_complex(linalg.dense_eig(A, balance=balance, backend=backend))
    ref = np.sort_complex(np.linalg.eigvals(A))
    assert np.abs(got - ref).max() < 1e-9 * (1 + np.abs(ref).max())


def test_dense_eig_badly_scaled(backend):
    n = 30
    D = np.diag(10.0 ** np.linspace(-6, 6, n))
    A = D @ _rand(1, n) @ np.linalg.inv(D)
    got = np.sort_complex(linalg.dense_eig(A, backend=backend))
    ref = np.sort_complex(np.linalg.eigvals(_rand(1, n)))
    assert np.abs(got - ref).max() < 1e-6


@given(seed=st.integers(0, 10**6), n=st.integers(1, 30))
def test_singular_values_and_cond(backend, seed, n):
    A = _rand(seed, n)
    s = linalg.singular_values(A, backend=backend)
    assert np.allclose(s, np.linalg.svd(A, compute_uv=False), rtol=1e-10, atol=1e-12)
    assert linalg.cond2(A, backend=backend) == pytest.approx(np.linalg.cond(A), rel=1e-8)


def test_singular_values_complex():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    s = linalg.singular_values(A)
    ref = np.linalg.svd(A, compute_uv=False)
    assert np.allclose(s[::2], ref, rtol=1e-10)


def test_cond_of_singular_matrix_is_inf():
    assert linalg.cond2(np.zeros((3, 3))) == np.inf


@given(seed=st.integers(0, 10**6), n=st.integers(2, 40))
def test_bicgstab_converges_on_well_conditioned_systems(seed, n):
    A = _rand(seed, n, shift=3 * np.sqrt(n))
    b = np.random.default_rng(seed).standard_normal(n)
    x, stats = linalg.bicgstab(A, b, tol=1e-12)
    assert stats.converged
    assert np.linalg.norm(A @ x - b) <= 1e-10 * np.linalg.norm(b)


def test_bicgstab_identity_needs_no_full_step():
    x, stats = linalg.bicgstab(np.eye(5), np.arange(1.0, 6.0))
    assert stats.converged and stats.iterations == 0
    assert np.allclose(x, np.arange(1.0, 6.0))


def test_bicgstab_preconditioner_and_callable():
    rng = np.random.default_rng(2)
    n = 30
    A = np.diag(np.linspace(1, 1e4, n)) + 0.1 * rng.standard_normal((n, n))
    b = rng.standard_normal(n)
    dinv = 1.0 / np.diag(A)
    x, stats = linalg.bicgstab(lambda v: A @ v, b, M=lambda v: dinv * v)
    assert stats.converged
    assert np.allclose(A @ x, b, atol=1e-8)


def test_bicgstab_zero_rhs_and_bad_tol():
    x, stats = linalg.bicgstab(np.eye(3), np.zeros(3))
    assert stats.iterations == 0 and not x.any()
    with pytest.raises(InvalidArgumentError):
        linalg.bicgstab(np.eye(3), np.ones(3), tol=0.0)


def test_bicgstab_complex():
    rng = np.random.default_rng(9)
    n = 20
    A = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) + 8 * np.eye(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x, stats = linalg.bicgstab(A, b)
    assert stats.converged and np.allclose(A @ x, b, atol=1e-9)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_kernel_backends_agree_on_legendre_tables(m):
    if len({"numba", "numpy"} & {"numba" if linalg._jit else "", "numpy"}) < 2:
        pytest.skip("numba unavailable")
    x = np.linspace(-1, 1, 37)
    a = linalg.kernels("numba").legendre_table(x, 40, 2)
    b = linalg.kernels("numpy").legendre_table(x, 40, 2)
    assert np.allclose(a[m], b[m], rtol=1e-13, atol=1e-10)
    coef = np.random.default_rng(0).standard_normal(40)
    assert np.allclose(linalg.kernels("numba").legendre_series(coef, x, m),
                       linalg.kernels("numpy").legendre_series(coef, x, m),
                       rtol=1e-12, atol=1e-9)


def test_legendre_table_matches_numpy_polynomial(backend):
    x = np.linspace(-1, 1, 11)
    t = linalg.kernels(backend).legendre_table(x, 12, 2)
    for k in (0, 3, 11):
        ck = np.eye(12)[k] * np.sqrt(k + 0.5)
        assert np.allclose(t[0][:, k], np.polynomial.legendre.legval(x, ck), atol=1e-13)
        d1 = np.polynomial.legendre.legder(ck)
        assert np.allclose(t[1][:, k], np.polynomial.legendre.legval(x, d1), atol=1e-11)
        d2 = np.polynomial.legendre.legder(ck, 2)
        assert np.allclose(t[2][:, k], np.polynomial.legendre.legval(x, d2), atol=1e-9)


def test_unknown_backend():
    with pytest.raises(InvalidArgumentError):
        linalg.kernels("fortran")


def test_environment_flag_selects_numpy():
    env = dict(os.environ, PSWFKIT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c",
                          "from pswfkit import _accel; print(_accel.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_whole_pipeline_agrees_across_backends(process_backend):
    from pswfkit import build_basis, diff_operators, prolate_grid

    b = build_basis(16.0, 32)
    g = prolate_grid(b)
    ops = diff_operators(b, g)
    lam = np.sort(linalg.dense_eig(ops.interior("D2")).real)
    assert lam[-1] == pytest.approx(-(np.pi / 2) ** 2, rel=1e-10)
