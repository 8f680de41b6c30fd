import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pswfkit import (IllConditionedError, build_basis, diff_operators, eval_psi,
                     modal_diffmats, prolate_grid, q_ratio, rational_diffmats)
from pswfkit import tolerances as tol
from pswfkit.quadrature import lgl_rule


def lgl_d1(N):
    x, _ = lgl_rule(N)
    P = np.polynomial.legendre.legval(x, np.eye(N + 1)[N])
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    D = P[:, None] / (P[None, :] * d)
    np.fill_diagonal(D, 0.0)
    D[0, 0], D[-1, -1] = -N * (N + 1) / 4.0, N * (N + 1) / 4.0
    return D


def rational_cardinal(b, x_nodes, k, x):
    """Direct evaluation of s(x) / (s'(x_k)(x - x_k)) with s = (1 - x^2) psi_N'."""
    N = b.N
    s = (1 - x * x) * eval_psi(b, N, x, 1)
    xk = x_nodes[k]
    sp = -2 * xk * eval_psi(b, N, xk, 1) + (1 - xk * xk) * eval_psi(b, N, xk, 2)
    return s / (sp * (x - xk))


@pytest.mark.parametrize("N", [4, 8, 16])
def test_zero_bandwidth_matches_lgl_matrix(N):
    b = build_basis(0.0, N)
    ops = diff_operators(b, prolate_grid(b))
    D = lgl_d1(N)
    assert np.abs(ops.D1 - D).max() < 1e-11 * np.abs(D).max()
    assert np.abs(ops.Dh1 - D).max() < 1e-11 * np.abs(D).max()
    assert np.abs(ops.Dh2 - ops.D2).max() < 1e-10 * np.abs(ops.D2).max()
    assert np.abs(ops.D2 - D @ D).max() < 1e-10 * np.abs(ops.D2).max()


@given(c=st.floats(0.0, 40.0), N=st.integers(4, 40))
def test_modal_matrices_reproduce_derivatives(c, N):
    b = build_basis(c, max(N, int(c)))
    ops = diff_operators(b, prolate_grid(b), rational=False)
    scale = np.abs(ops.Psi1).max() + 1.0
    assert np.abs(ops.D1 @ ops.Psi - ops.Psi1).max() < 1e-10 * scale
    assert np.abs(ops.D2 @ ops.Psi - ops.Psi2).max() < 1e-10 * (np.abs(ops.Psi2).max() + 1.0)
    assert np.isnan(ops.Dh1).all()


def test_rational_matrices_match_finite_differences():
    b = build_basis(10.0, 16)
    g = prolate_grid(b)
    Dh1, Dh2 = rational_diffmats(b, g)
    x = g.nodes
    h = 1e-3
    for k in (0, 3, 8):
        for j in (2, 5, 8, 13):
            if j == k:
                continue
            f = rational_cardinal(b, x, k, x[j] + h * np.arange(-2, 3))
            d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
            d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
            assert d1 == pytest.approx(Dh1[j, k], rel=1e-7, abs=1e-7)
            assert d2 == pytest.approx(Dh2[j, k], rel=1e-5, abs=1e-5)


def test_rational_rows_annihilate_constants():
    b = build_basis(20.0, 30)
    Dh1, Dh2 = rational_diffmats(b, prolate_grid(b))
    assert np.abs(Dh1.sum(axis=1)).max() < 1e-9 * np.abs(Dh1).max()
    assert np.abs(Dh2.sum(axis=1)).max() < 1e-9 * np.abs(Dh2).max()


def test_corners_are_antisymmetric():
    b = build_basis(15.0, 24)
    ops = diff_operators(b, prolate_grid(b))
    assert ops.Dh1[0, 0] == pytest.approx(-ops.Dh1[-1, -1], rel=1e-14)
    assert ops.D1[0, 0] == pytest.approx(-ops.D1[-1, -1], rel=1e-10)


def test_second_derivative_vs_squared_first():
    # only approximately equal: the span is not closed under differentiation
    b = build_basis(10.0, 24)
    ops = diff_operators(b, prolate_grid(b), rational=False)
    D11 = (ops.D1 @ ops.D1)[1:-1]
    rel = np.abs(ops.D2[1:-1] - D11).max() / np.abs(ops.D2).max()
    assert rel < 1e-3


def test_q_warning_and_ratio():
    b = build_basis(200.0, 163)
    assert q_ratio(b) > tol.Q_ADMISSIBLE
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        modal_diffmats(b, prolate_grid(b))
    assert any("exceeds" in str(r.message) for r in rec)


def test_ill_conditioning_raises(monkeypatch):
    b = build_basis(30.0, 40)
    g = prolate_grid(b)
    monkeypatch.setattr(tol, "ILL_COND_LIMIT", 10.0)
    with pytest.raises(IllConditionedError) as exc:
        modal_diffmats(b, g)
    assert exc.value.args


def test_read_only_and_interior_view():
    b = build_basis(5.0, 10)
    ops = diff_operators(b, prolate_grid(b))
    assert ops.interior("D2").shape == (9, 9)
    with pytest.raises(ValueError):
        ops.D1[0, 0] = 1.0
