import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pswfkit import (InvalidArgumentError, ProlateBasis, ProlateParams, build_basis,
                     eval_psi, lambda_n, lambda_upper_bound)
from pswfkit.core import prolate_matrix_bands
from pswfkit.quadrature import gauss_legendre


def sinc_kernel_eigs(c, n_pts=120):
    """Nystrom eigenvalues of sin(c(x-t))/(pi(x-t)) on [-1, 1], descending."""
    t, w = np.polynomial.legendre.leggauss(n_pts)
    d = t[:, None] - t[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        K = np.sin(c * d) / (np.pi * d)
    np.fill_diagonal(K, c / np.pi)
    s = np.sqrt(w)
    return np.sort(np.linalg.eigvalsh(s[:, None] * K * s[None, :]))[::-1]


@given(c=st.floats(0.0, 60.0), N=st.integers(1, 40))
def test_coefficient_rows_are_normalized_with_parity_and_sign(c, N):
    b = build_basis(c, N)
    C = b.coeffs
    assert np.allclose(np.linalg.norm(C, axis=1), 1.0, atol=1e-14)
    for n in range(N + 1):
        assert np.all(C[n, (n + 1) % 2::2] == 0.0)
        assert C[n, n] > 0.0
    assert np.all(np.diff(b.chi) > 0.0)


def test_c_zero_reduces_to_legendre():
    b = build_basis(0.0, 10)
    n = np.arange(11)
    assert np.allclose(b.chi, n * (n + 1), atol=1e-12)
    assert np.allclose(b.coeffs[:, :11], np.eye(11), atol=1e-14)
    x = np.linspace(-1, 1, 9)
    ref = np.polynomial.legendre.legval(x, np.eye(11)[7]) * math.sqrt(7.5)
    assert np.allclose(eval_psi(b, 7, x), ref, atol=1e-13)


def test_chi_small_c_series():
    c = 0.01
    b = build_basis(c, 6)
    for n in range(7):
        series = n * (n + 1) + c * c * (2 * n * (n + 1) - 1) / ((2 * n - 1) * (2 * n + 3))
        assert abs(b.chi[n] - series) < 1e-9


def mp_chi(c, count, M=60):
    """Separation constants from the classical symmetric matrix in 40-digit arithmetic."""
    mp = pytest.importorskip("mpmath")
    with mp.workdps(40):
        c2 = mp.mpf(c) ** 2
        A = mp.zeros(M, M)
        for k in range(M):
            A[k, k] = k * (k + 1) + c2 * (2 * k * (k + 1) - 1) / mp.mpf((2 * k - 1) * (2 * k + 3))
            if k + 2 < M:
                v = c2 * (k + 1) * (k + 2) / ((2 * k + 3) * mp.sqrt(mp.mpf((2 * k + 1) * (2 * k + 5))))
                A[k, k + 2] = A[k + 2, k] = v
        E = mp.eigsy(A, eigvals_only=True)
        return sorted(float(E[i]) for i in range(M))[:count]


@pytest.mark.parametrize("c", [1.0, 10.0])
def test_chi_against_high_precision_oracle(c):
    b = build_basis(c, 8)
    assert np.allclose(b.chi, mp_chi(c, 9), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("c", [1.0, 10.0, 50.0])
def test_orthonormality(c):
    t, w = gauss_legendre(400)
    V = build_basis(c, 32).values(t)
    assert np.abs(V.T @ (w[:, None] * V) - np.eye(33)).max() < 1e-12


@given(c=st.floats(0.5, 80.0), seed=st.integers(0, 2**16))
def test_sturm_liouville_residual(c, seed):
    N = 20
    b = build_basis(c, N)
    x = np.random.default_rng(seed).uniform(-0.95, 0.95, 8)
    for n in range(N + 1):
        p0, p1, p2 = (eval_psi(b, n, x, m) for m in (0, 1, 2))
        res = -((1 - x * x) * p2 - 2 * x * p1) + c * c * x * x * p0 - b.chi[n] * p0
        assert np.abs(res).max() < 1e-8 * (1.0 + b.chi[n])


def test_eval_psi_scalar_and_parity():
    b = build_basis(7.0, 9)
    v = eval_psi(b, 3, 0.4)
    assert isinstance(v, float)
    assert eval_psi(b, 3, -0.4) == pytest.approx(-v, abs=1e-15)
    assert eval_psi(b, 4, -0.4) == pytest.approx(eval_psi(b, 4, 0.4), abs=1e-15)


def test_derivatives_match_finite_differences():
    b = build_basis(12.0, 15)
    x = np.linspace(-0.8, 0.8, 7)
    h = 1e-5
    for n in (0, 5, 15):
        fd1 = (eval_psi(b, n, x + h) - eval_psi(b, n, x - h)) / (2 * h)
        fd2 = (eval_psi(b, n, x + h, 1) - eval_psi(b, n, x - h, 1)) / (2 * h)
        assert np.allclose(eval_psi(b, n, x, 1), fd1, atol=1e-6 * (1 + abs(fd1).max()))
        assert np.allclose(eval_psi(b, n, x, 2), fd2, atol=1e-5 * (1 + abs(fd2).max()))


def test_matrix_bands_symmetric_truncation():
    diag, band = prolate_matrix_bands(3.0, 8)
    assert diag.shape == (8,) and band.shape == (6,)
    assert diag[0] == pytest.approx(9.0 / 3.0)


def test_lambda_against_sinc_kernel_oracle():
    c = 5.0
    mu = sinc_kernel_eigs(c)
    b = build_basis(c, 12)
    for n in range(8):
        est = c * lambda_n(b, n) ** 2 / (2 * math.pi)
        assert est == pytest.approx(mu[n], rel=1e-3)


def test_lambda_magnitude_at_cutoff():
    b = build_basis(10.0, 24)
    lam = lambda_n(b, 24)
    assert 1e-15 < lam < 1e-13


def test_lambda_upper_bound_holds():
    b = build_basis(10.0, 20)
    for n in range(21):
        assert lambda_n(b, n) <= lambda_upper_bound(10.0, n) * (1 + 1e-6)


def test_lambda_at_zero_bandwidth():
    b = build_basis(0.0, 3)
    assert lambda_n(b, 0) == 2.0 and lambda_n(b, 2) == 0.0


def test_json_roundtrip_and_read_only():
    b = build_basis(4.0, 6)
    b2 = ProlateBasis.from_json(b.to_json())
    assert b2.c == b.c and b2.N == b.N and b2.M == b.M
    assert np.array_equal(b2.coeffs, b.coeffs)
    assert set(json.loads(b.to_json())) == {"c", "N", "M", "chi", "coeffs"}
    with pytest.raises(ValueError):
        b.coeffs[0, 0] = 1.0


def test_integrals_match_quadrature():
    b = build_basis(9.0, 10)
    t, w = gauss_legendre(200)
    assert np.allclose(b.integrals(), w @ b.values(t), atol=1e-14)


@pytest.mark.parametrize("args", [(-1.0, 4), (float("nan"), 4), (1.0, 0), (1.0, 2.5),
                                  (1.0, 5000)])
def test_build_basis_rejects_bad_input(args):
    with pytest.raises(InvalidArgumentError):
        build_basis(*args)


def test_eval_rejects_out_of_range():
    b = build_basis(1.0, 4)
    with pytest.raises(InvalidArgumentError):
        eval_psi(b, 5, 0.0)
    with pytest.raises(InvalidArgumentError):
        eval_psi(b, 1, 1.5)
    with pytest.raises(InvalidArgumentError):
        eval_psi(b, 1, 0.0, m=3)


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        ProlateParams(1.0, 10, 5)
